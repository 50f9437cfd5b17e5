//! Polynomial formulas over named invariants, stored as data files.
//!
//! ```text
//! # name: Jfrak1
//! # terms: 248
//! # degree: 12
//! # sha256: <hex digest of the term lines joined by '\n'>
//! -151800i I2 I3^3 I4a I4b I4c^2
//! 7 I4a I4c
//! ```
//! A term line is a Gaussian-rational coefficient in compact form (`3`,
//! `-5/2`, `12i`, `1+2i`) followed by space-separated factors `Name` or
//! `Name^k`. A coefficient with no factors is a constant term.

use std::collections::BTreeMap;

use sha2::{Digest, Sha256};

use crate::expr::{Expr, GaussRational};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{name}: missing header field `{field}`")]
    Header { name: String, field: &'static str },
    #[error("{name}: {what} mismatch (declared {declared}, found {found})")]
    Checksum {
        name: String,
        what: &'static str,
        declared: String,
        found: String,
    },
    #[error("unknown symbol `{0}`")]
    Unknown(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: GaussRational,
    pub factors: Vec<(String, u32)>,
}

#[derive(Clone, Debug)]
pub struct Formula {
    pub name: String,
    pub terms: Vec<Term>,
    declared_terms: Option<usize>,
    declared_degree: Option<u32>,
    declared_sha: Option<String>,
    body: Vec<String>,
}

const FILES: [(&str, &str); 10] = [
    ("J4", include_str!("../../data/J4.poly")),
    ("J5", include_str!("../../data/J5.poly")),
    ("I6a_rel", include_str!("../../data/I6a_rel.poly")),
    ("I6b_rel", include_str!("../../data/I6b_rel.poly")),
    ("I6c_rel", include_str!("../../data/I6c_rel.poly")),
    ("I6d_rel", include_str!("../../data/I6d_rel.poly")),
    ("Jfrak1", include_str!("../../data/Jfrak1.poly")),
    ("Jfrak2", include_str!("../../data/Jfrak2.poly")),
    ("Jfrak3", include_str!("../../data/Jfrak3.poly")),
    ("Jfrak4", include_str!("../../data/Jfrak4.poly")),
];

/// Raw text of a bundled formula file.
pub fn bundled_text(name: &str) -> Option<&'static str> {
    FILES.iter().find(|f| f.0 == name).map(|f| f.1)
}

pub fn bundled_names() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|f| f.0)
}

/// Parses and verifies a bundled formula. Panics if the bundled data is
/// corrupt, which a test guards against.
pub fn bundled(name: &str) -> Formula {
    let f =
        Formula::parse(bundled_text(name).unwrap_or_else(|| panic!("no bundled formula {name}")))
            .unwrap_or_else(|e| panic!("{name}: {e}"));
    f.verify().unwrap_or_else(|e| panic!("{e}"));
    f
}

fn parse_factor(s: &str, line: usize) -> Result<(String, u32), FormulaError> {
    let err = |m: String| FormulaError::Syntax { line, message: m };
    match s.split_once('^') {
        Some((n, k)) => {
            let k: u32 = k
                .parse()
                .map_err(|_| err(format!("bad exponent in `{s}`")))?;
            if k == 0 {
                return Err(err(format!("zero exponent in `{s}`")));
            }
            Ok((n.to_string(), k))
        }
        None => Ok((s.to_string(), 1)),
    }
}

impl Formula {
    pub fn parse(text: &str) -> Result<Formula, FormulaError> {
        let mut f = Formula {
            name: String::new(),
            terms: Vec::new(),
            declared_terms: None,
            declared_degree: None,
            declared_sha: None,
            body: Vec::new(),
        };
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let l = raw.trim();
            if l.is_empty() {
                continue;
            }
            if let Some(h) = l.strip_prefix('#') {
                if let Some((key, val)) = h.split_once(':') {
                    let val = val.trim();
                    let bad = |m: &str| FormulaError::Syntax {
                        line,
                        message: m.to_string(),
                    };
                    match key.trim() {
                        "name" => f.name = val.to_string(),
                        "terms" => {
                            f.declared_terms = Some(val.parse().map_err(|_| bad("bad term count"))?)
                        }
                        "degree" => {
                            f.declared_degree = Some(val.parse().map_err(|_| bad("bad degree"))?)
                        }
                        "sha256" => f.declared_sha = Some(val.to_lowercase()),
                        _ => {}
                    }
                }
                continue;
            }
            let mut parts = l.split_whitespace();
            let c = parts.next().unwrap();
            let coeff = GaussRational::parse_compact(c).ok_or_else(|| FormulaError::Syntax {
                line,
                message: format!("bad coefficient `{c}`"),
            })?;
            let factors = parts
                .map(|p| parse_factor(p, line))
                .collect::<Result<Vec<_>, _>>()?;
            f.terms.push(Term { coeff, factors });
            f.body.push(l.to_string());
        }
        Ok(f)
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.factors.iter().map(|f| f.1).sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.body.join("\n").as_bytes()))
    }

    /// Checks term count, degree and digest against the header.
    pub fn verify(&self) -> Result<(), FormulaError> {
        let name = self.name.clone();
        let missing = |field| FormulaError::Header {
            name: name.clone(),
            field,
        };
        let mismatch = |what, d: String, f: String| FormulaError::Checksum {
            name: name.clone(),
            what,
            declared: d,
            found: f,
        };
        let t = self.declared_terms.ok_or_else(|| missing("terms"))?;
        if t != self.terms.len() {
            return Err(mismatch(
                "term count",
                t.to_string(),
                self.terms.len().to_string(),
            ));
        }
        let d = self.declared_degree.ok_or_else(|| missing("degree"))?;
        if d != self.degree() {
            return Err(mismatch("degree", d.to_string(), self.degree().to_string()));
        }
        let s = self
            .declared_sha
            .as_ref()
            .ok_or_else(|| missing("sha256"))?;
        if *s != self.digest() {
            return Err(mismatch("sha256", s.clone(), self.digest()));
        }
        Ok(())
    }

    /// Distinct symbols with their maximal exponents.
    pub fn symbols(&self) -> BTreeMap<String, u32> {
        let mut out = BTreeMap::new();
        for t in &self.terms {
            for (n, k) in &t.factors {
                let e = out.entry(n.clone()).or_insert(0);
                *e = (*e).max(*k);
            }
        }
        out
    }

    /// Weight under a grading of the symbols; `None` if not homogeneous.
    pub fn weight(&self, w: impl Fn(&str) -> i64) -> Option<i64> {
        let mut ws = self
            .terms
            .iter()
            .map(|t| t.factors.iter().map(|(n, k)| w(n) * *k as i64).sum::<i64>());
        let first = ws.next()?;
        ws.all(|x| x == first).then_some(first)
    }

    /// Substitutes expressions for the symbols.
    pub fn to_expr(&self, lookup: impl Fn(&str) -> Option<Expr>) -> Result<Expr, FormulaError> {
        let mut cache: BTreeMap<(String, u32), Expr> = BTreeMap::new();
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut fs = vec![Expr::constant(t.coeff.clone())];
            for (n, k) in &t.factors {
                let key = (n.clone(), *k);
                if !cache.contains_key(&key) {
                    let base = lookup(n).ok_or_else(|| FormulaError::Unknown(n.clone()))?;
                    cache.insert(key.clone(), base.pow(*k as i64));
                }
                fs.push(cache[&key].clone());
            }
            terms.push(Expr::mul_all(fs));
        }
        Ok(Expr::add_all(terms))
    }
}
