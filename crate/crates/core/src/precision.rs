use crate::error::{domain, Result};

/// Accuracy knobs threaded through every numerical routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionContext {
    pub rel_tol: f64,
    pub abs_floor: f64,
    pub max_terms: u64,
    /// Multiplier applied to tail estimates before comparing against `rel_tol`.
    pub tail_safety: f64,
    /// Number of Bernoulli correction terms in Euler-Maclaurin tails. Even, at least 2.
    pub em_order: usize,
    /// Arguments are shifted up by recurrence until they reach this value.
    pub shift_threshold: f64,
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            abs_floor: 1e-300,
            max_terms: 10_000_000,
            tail_safety: 10.0,
            em_order: 8,
            shift_threshold: 16.0,
        }
    }
}

impl PrecisionContext {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(domain("PrecisionContext", format!("rel_tol = {}", self.rel_tol)));
        }
        if !(self.abs_floor >= 0.0) {
            return Err(domain("PrecisionContext", format!("abs_floor = {}", self.abs_floor)));
        }
        if self.max_terms == 0 {
            return Err(domain("PrecisionContext", "max_terms = 0"));
        }
        if !(self.tail_safety >= 1.0) {
            return Err(domain("PrecisionContext", format!("tail_safety = {}", self.tail_safety)));
        }
        if self.em_order < 2 || self.em_order % 2 != 0 || self.em_order > 30 {
            return Err(domain("PrecisionContext", format!("em_order = {}", self.em_order)));
        }
        if !(self.shift_threshold >= 4.0) {
            return Err(domain(
                "PrecisionContext",
                format!("shift_threshold = {}", self.shift_threshold),
            ));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_terms(mut self, max_terms: u64) -> Self {
        self.max_terms = max_terms;
        self
    }
}

/// What a truncated summation did: how many terms it used and a bound on what it dropped.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Truncation {
    pub terms: u64,
    pub tail_bound: f64,
}

impl Truncation {
    pub fn exact(terms: u64) -> Self {
        Self {
            terms,
            tail_bound: 0.0,
        }
    }

    pub fn combine(self, other: Truncation) -> Self {
        Self {
            terms: self.terms + other.terms,
            tail_bound: self.tail_bound + other.tail_bound,
        }
    }
}

/// A value together with its truncation metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approx {
    pub value: f64,
    pub truncation: Truncation,
}
