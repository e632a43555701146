//! Binary bag-of-words corpora.
//!
//! File format, one record per line:
//!
//! ```text
//! #vocab <token>                      vocabulary, in index order
//! #meta <free text>                   provenance, kept verbatim
//! <domain>\t<label 0|1>\t<indices>    one document
//! ```
//!
//! Indices are 0-based and space-separated. A repeated index is a repeated
//! word and collapses to a single 1; indices must otherwise increase. An
//! empty index list is an all-zero document.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use mdlearn::{BitVec, DomainId, Example};
use serde::Serialize;

use crate::BenchError;

pub const DEFAULT_MIN_OCCURRENCES: usize = 50;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub domain: String,
    pub label: bool,
    /// Strictly increasing token indices.
    pub tokens: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BagOfWordsCorpus {
    pub vocab: Vec<String>,
    pub documents: Vec<Document>,
    pub meta: Vec<String>,
}

/// Examples of one domain.
#[derive(Clone, Debug)]
pub struct DomainData {
    pub name: String,
    pub examples: Vec<Example>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DomainStats {
    pub domain: String,
    pub pages: usize,
    pub positive_fraction: f64,
    /// Mean fraction of vocabulary words present in a document.
    pub density: f64,
    pub density_positive: Option<f64>,
    pub density_negative: Option<f64>,
}

fn parse_err(line: usize, message: impl Into<String>) -> BenchError {
    BenchError::Core(mdlearn::Error::Parse { line, message: message.into() })
}

impl BagOfWordsCorpus {
    pub fn parse(text: &str) -> Result<Self, BenchError> {
        let mut corpus = BagOfWordsCorpus::default();
        let mut doc_lines = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let lineno = i + 1;
            if let Some(rest) = line.strip_prefix("#vocab ") {
                let token = rest.trim();
                if token.is_empty() || token.contains(char::is_whitespace) {
                    return Err(parse_err(lineno, "vocabulary tokens must be single non-empty words"));
                }
                corpus.vocab.push(token.to_string());
            } else if let Some(rest) = line.strip_prefix("#meta") {
                corpus.meta.push(rest.trim().to_string());
            } else if line.trim().is_empty() {
                continue;
            } else if line.starts_with('#') {
                return Err(parse_err(lineno, format!("unknown header `{line}`")));
            } else {
                doc_lines.push((lineno, line));
            }
        }
        let n = corpus.vocab.len();
        for (lineno, line) in doc_lines {
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(parse_err(lineno, format!("expected 3 tab-separated fields, found {}", fields.len())));
            }
            let domain = fields[0].trim();
            if domain.is_empty() {
                return Err(parse_err(lineno, "empty domain id"));
            }
            let label = match fields[1].trim() {
                "0" => false,
                "1" => true,
                other => return Err(parse_err(lineno, format!("label must be 0 or 1, got `{other}`"))),
            };
            let mut tokens: Vec<usize> = Vec::new();
            for tok in fields[2].split_whitespace() {
                let k: usize = tok.parse().map_err(|_| parse_err(lineno, format!("bad token index `{tok}`")))?;
                if k >= n {
                    return Err(parse_err(lineno, format!("token index {k} outside vocabulary of {n}")));
                }
                match tokens.last() {
                    Some(&prev) if k < prev => {
                        return Err(parse_err(lineno, format!("token indices must be sorted ({k} after {prev})")))
                    }
                    Some(&prev) if k == prev => {}
                    _ => tokens.push(k),
                }
            }
            corpus.documents.push(Document { domain: domain.to_string(), label, tokens });
        }
        Ok(corpus)
    }

    pub fn load(path: &Path) -> Result<Self, BenchError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for m in &self.meta {
            writeln!(out, "#meta {m}").unwrap();
        }
        for v in &self.vocab {
            writeln!(out, "#vocab {v}").unwrap();
        }
        for d in &self.documents {
            let idx: Vec<String> = d.tokens.iter().map(usize::to_string).collect();
            writeln!(out, "{}\t{}\t{}", d.domain, u8::from(d.label), idx.join(" ")).unwrap();
        }
        out
    }

    /// Domain ids in order of first appearance.
    pub fn domains(&self) -> Vec<String> {
        let mut seen = Vec::<String>::new();
        for d in &self.documents {
            if !seen.contains(&d.domain) {
                seen.push(d.domain.clone());
            }
        }
        seen
    }

    /// Number of documents containing each token.
    pub fn document_frequencies(&self) -> Vec<usize> {
        let mut df = vec![0; self.vocab.len()];
        for d in &self.documents {
            for &k in &d.tokens {
                df[k] += 1;
            }
        }
        df
    }

    /// Drops tokens present in fewer than `min` documents and renumbers the rest.
    pub fn filter_min_occurrences(&self, min: usize) -> Self {
        let df = self.document_frequencies();
        let mut remap = vec![None; self.vocab.len()];
        let mut vocab = Vec::new();
        for (k, tok) in self.vocab.iter().enumerate() {
            if df[k] >= min {
                remap[k] = Some(vocab.len());
                vocab.push(tok.clone());
            }
        }
        let documents = self
            .documents
            .iter()
            .map(|d| Document {
                domain: d.domain.clone(),
                label: d.label,
                tokens: d.tokens.iter().filter_map(|&k| remap[k]).collect(),
            })
            .collect();
        let mut meta = self.meta.clone();
        meta.push(format!("filtered: tokens in fewer than {min} documents removed"));
        BagOfWordsCorpus { vocab, documents, meta }
    }

    /// Binary examples grouped by domain, in order of first appearance.
    pub fn domain_data(&self) -> Vec<DomainData> {
        let names = self.domains();
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let mut groups: Vec<Vec<Example>> = vec![Vec::new(); names.len()];
        let n = self.vocab.len();
        for d in &self.documents {
            let z = index[d.domain.as_str()];
            groups[z].push(Example::with_domain(BitVec::from_indices(n, &d.tokens), d.label, DomainId(z as u64)));
        }
        names.into_iter().zip(groups).map(|(name, examples)| DomainData { name, examples }).collect()
    }

    /// Per-domain statistics followed by an `all` row.
    pub fn stats(&self) -> Vec<DomainStats> {
        let n = self.vocab.len().max(1) as f64;
        let summarize = |name: String, docs: Vec<&Document>| {
            let density_of = |ds: &[&&Document]| {
                (!ds.is_empty()).then(|| ds.iter().map(|d| d.tokens.len() as f64 / n).sum::<f64>() / ds.len() as f64)
            };
            let all: Vec<&&Document> = docs.iter().collect();
            let pos: Vec<&&Document> = docs.iter().filter(|d| d.label).collect();
            let neg: Vec<&&Document> = docs.iter().filter(|d| !d.label).collect();
            DomainStats {
                domain: name,
                pages: docs.len(),
                positive_fraction: pos.len() as f64 / docs.len().max(1) as f64,
                density: density_of(&all).unwrap_or(0.0),
                density_positive: density_of(&pos),
                density_negative: density_of(&neg),
            }
        };
        let mut rows: Vec<DomainStats> = self
            .domains()
            .into_iter()
            .map(|z| {
                let docs = self.documents.iter().filter(|d| d.domain == z).collect();
                summarize(z, docs)
            })
            .collect();
        rows.push(summarize("all".into(), self.documents.iter().collect()));
        rows
    }
}

pub fn write_stats_csv<W: std::io::Write>(rows: &[DomainStats], out: W) -> Result<(), BenchError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
