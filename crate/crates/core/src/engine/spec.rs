use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::terms::scalar::{format_scalar, int, is_integer};
use crate::terms::{DerivedGenerator, Generator, Parity, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid spec: {0}")]
    Validation(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Quantum,
    Classical,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Quantum => "quantum",
            Mode::Classical => "classical",
        }
    }
}

/// Graded tables need exact weight balance in every entry; filtered tables
/// only need every term to sit at or below the expected weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Grading {
    Graded,
    Filtered,
}

/// Linear combination of `λ^n · word`, where a word is a right-nested
/// product of derived generators not yet brought to canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RawPoly {
    terms: BTreeMap<(u32, Vec<DerivedGenerator>), Scalar>,
}

impl RawPoly {
    pub fn zero() -> Self {
        RawPoly::default()
    }

    pub fn term(power: u32, word: Vec<DerivedGenerator>, c: Scalar) -> Self {
        let mut p = RawPoly::zero();
        p.add_term(power, word, c);
        p
    }

    pub fn add_term(&mut self, power: u32, word: Vec<DerivedGenerator>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (power, word);
        let e = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add_scaled(&mut self, other: &RawPoly, c: &Scalar) {
        for ((n, w), k) in &other.terms {
            self.add_term(*n, w.clone(), k * c);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &[DerivedGenerator], &Scalar)> {
        self.terms.iter().map(|((n, w), c)| (*n, w.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_power(&self) -> u32 {
        self.terms.keys().map(|(n, _)| *n).max().unwrap_or(0)
    }

    pub fn scaled(&self, c: &Scalar) -> RawPoly {
        let mut out = RawPoly::zero();
        out.add_scaled(self, c);
        out
    }
}

/// Rewrite rule `T^k g -> rhs` applied to every factor `T^m g` with `m >= k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub lhs: DerivedGenerator,
    pub rhs: RawPoly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketTable {
    pub entries: BTreeMap<(usize, usize), RawPoly>,
    pub mode: Mode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    pub name: String,
    pub generators: Vec<Generator>,
    pub table: BracketTable,
    pub relations: Vec<Relation>,
    pub params: Vec<(String, Scalar)>,
    pub grading: Grading,
}

pub(crate) const RESERVED: [&str; 3] = ["L", "T", "vac"];

impl AlgebraSpec {
    pub fn new(name: impl Into<String>, mode: Mode) -> Self {
        AlgebraSpec {
            name: name.into(),
            generators: Vec::new(),
            table: BracketTable { entries: BTreeMap::new(), mode },
            relations: Vec::new(),
            params: Vec::new(),
            grading: Grading::Graded,
        }
    }

    pub fn mode(&self) -> Mode {
        self.table.mode
    }

    pub fn add_generator(&mut self, name: &str, parity: Parity, weight: Scalar) -> usize {
        self.generators.push(Generator::new(name, parity, weight));
        self.generators.len() - 1
    }

    pub fn set_bracket(&mut self, a: usize, b: usize, value: RawPoly) {
        self.table.entries.insert((a, b), value);
    }

    pub fn set_param(&mut self, name: &str, value: Scalar) {
        match self.params.iter_mut().find(|(n, _)| n == name) {
            Some(slot) => slot.1 = value,
            None => self.params.push((name.to_string(), value)),
        }
    }

    pub fn param(&self, name: &str) -> Option<&Scalar> {
        self.params.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn without_relations(&self) -> AlgebraSpec {
        let mut s = self.clone();
        s.relations.clear();
        s
    }

    fn word_weight(&self, w: &[DerivedGenerator]) -> Scalar {
        w.iter().fold(Scalar::zero(), |acc, g| acc + g.weight(&self.generators))
    }

    fn word_parity(&self, w: &[DerivedGenerator]) -> Parity {
        w.iter().fold(Parity::Even, |acc, g| acc.add(g.parity(&self.generators)))
    }

    fn check_weight(&self, got: &Scalar, expected: &Scalar) -> bool {
        match self.grading {
            Grading::Graded => got == expected,
            Grading::Filtered => got <= expected,
        }
    }

    /// Static checks: names, weights, homogeneity and coverage of the table.
    pub fn validate(&self) -> Result<(), SpecError> {
        let bad = |m: String| Err(SpecError::Validation(m));
        if self.generators.is_empty() {
            return bad("no generators declared".into());
        }
        let mut names = BTreeSet::new();
        for g in &self.generators {
            if RESERVED.contains(&g.name.as_str()) {
                return bad(format!("generator name `{}` is reserved", g.name));
            }
            if !names.insert(g.name.clone()) {
                return bad(format!("generator `{}` declared twice", g.name));
            }
            let twice = &g.weight * int(2);
            if g.weight.is_negative() || !is_integer(&twice) {
                return bad(format!(
                    "generator `{}` has weight {}; weights must be non-negative half-integers",
                    g.name,
                    format_scalar(&g.weight)
                ));
            }
        }
        let mut pnames = BTreeSet::new();
        for (p, _) in &self.params {
            if !pnames.insert(p.clone()) {
                return bad(format!("parameter `{}` declared twice", p));
            }
            if names.contains(p) || RESERVED.contains(&p.as_str()) {
                return bad(format!("parameter `{}` clashes with a generator or keyword", p));
            }
        }
        let n = self.generators.len();
        for (&(a, b), entry) in &self.table.entries {
            if a >= n || b >= n {
                return bad(format!("bracket entry ({}, {}) refers to an unknown generator", a, b));
            }
            let label = format!("bracket {} {}", self.generators[a].name, self.generators[b].name);
            let wa = &self.generators[a].weight;
            let wb = &self.generators[b].weight;
            let parity = self.generators[a].parity.add(self.generators[b].parity);
            for (pow, word, _) in entry.iter() {
                if word.iter().any(|g| g.gen >= n) {
                    return bad(format!("{}: unknown generator in value", label));
                }
                let expected = wa + wb - int(pow as i64) - Scalar::one();
                let got = self.word_weight(word);
                if !self.check_weight(&got, &expected) {
                    return bad(format!(
                        "{}: term at L^{} has weight {}, expected {}",
                        label,
                        pow,
                        format_scalar(&got),
                        format_scalar(&expected)
                    ));
                }
                if self.word_parity(word) != parity {
                    return bad(format!("{}: term at L^{} has the wrong parity", label, pow));
                }
            }
        }
        for a in 0..n {
            for b in a..n {
                if !self.table.entries.contains_key(&(a, b)) && !self.table.entries.contains_key(&(b, a)) {
                    return bad(format!(
                        "no bracket declared for the pair ({}, {})",
                        self.generators[a].name, self.generators[b].name
                    ));
                }
            }
        }
        for r in &self.relations {
            if r.lhs.gen >= n {
                return bad("relation refers to an unknown generator".into());
            }
            let label = format!("relation for {}", self.generators[r.lhs.gen].name);
            let expected = r.lhs.weight(&self.generators);
            let parity = r.lhs.parity(&self.generators);
            for (pow, word, _) in r.rhs.iter() {
                if pow != 0 {
                    return bad(format!("{}: right-hand side may not involve L", label));
                }
                if word.iter().any(|g| g.gen >= n) {
                    return bad(format!("{}: unknown generator", label));
                }
                if !self.check_weight(&self.word_weight(word), &expected) {
                    return bad(format!("{}: right-hand side is not weight-homogeneous", label));
                }
                if self.word_parity(word) != parity {
                    return bad(format!("{}: right-hand side has the wrong parity", label));
                }
            }
        }
        Ok(())
    }
}
