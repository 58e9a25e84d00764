use std::cmp::Ordering;

use crate::{Error, Result};

/// Packing of exponent vectors into a `u64`. Every variable gets enough bits
/// for its cap plus one guard bit, so adding two packed monomials never
/// carries across fields; products whose exponents exceed a cap are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialLayout {
    caps: Vec<u32>,
    shifts: Vec<u32>,
    masks: Vec<u64>,
}

impl MonomialLayout {
    pub fn new(caps: &[u32]) -> Result<Self> {
        let mut shifts = Vec::with_capacity(caps.len());
        let mut masks = Vec::with_capacity(caps.len());
        let mut used = 0u32;
        for &cap in caps {
            let width = (32 - cap.leading_zeros()) + 1;
            shifts.push(used);
            masks.push((1u64 << width) - 1);
            used += width;
        }
        if used > 64 {
            return Err(Error::TooLarge(format!("monomial caps {caps:?} need {used} bits")));
        }
        Ok(MonomialLayout { caps: caps.to_vec(), shifts, masks })
    }

    pub fn arity(&self) -> usize {
        self.caps.len()
    }

    pub fn caps(&self) -> &[u32] {
        &self.caps
    }

    /// Packs an exponent vector, or `None` if some exponent exceeds its cap.
    pub fn pack(&self, exps: &[u32]) -> Option<u64> {
        debug_assert_eq!(exps.len(), self.arity());
        let mut out = 0;
        for (i, &e) in exps.iter().enumerate() {
            if e > self.caps[i] {
                return None;
            }
            out |= (e as u64) << self.shifts[i];
        }
        Some(out)
    }

    pub fn unpack(&self, m: u64) -> Vec<u32> {
        (0..self.arity()).map(|i| self.field(m, i)).collect()
    }

    fn field(&self, m: u64, i: usize) -> u32 {
        ((m >> self.shifts[i]) & self.masks[i]) as u32
    }

    /// Product of two packed monomials, or `None` past a cap.
    pub fn mul(&self, a: u64, b: u64) -> Option<u64> {
        let s = a + b;
        (0..self.arity()).all(|i| self.field(s, i) <= self.caps[i]).then_some(s)
    }
}

/// Sparse multivariate polynomial over GF(2): the set of monomials with
/// coefficient 1, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Gf2Polynomial {
    terms: Vec<u64>,
}

impl Gf2Polynomial {
    pub fn zero() -> Self {
        Gf2Polynomial { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Gf2Polynomial { terms: vec![0] }
    }

    /// The monomial with the given exponents, or zero if it exceeds the caps.
    pub fn monomial(layout: &MonomialLayout, exps: &[u32]) -> Self {
        Gf2Polynomial { terms: layout.pack(exps).into_iter().collect() }
    }

    pub fn from_packed(mut terms: Vec<u64>) -> Self {
        terms.sort_unstable();
        Gf2Polynomial { terms: cancel_pairs(terms) }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms == [0]
    }

    /// Number of monomials with coefficient 1.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[u64] {
        &self.terms
    }

    pub fn coefficient(&self, layout: &MonomialLayout, exps: &[u32]) -> bool {
        layout.pack(exps).is_some_and(|m| self.terms.binary_search(&m).is_ok())
    }

    pub fn exponents(&self, layout: &MonomialLayout) -> Vec<Vec<u32>> {
        self.terms.iter().map(|&m| layout.unpack(m)).collect()
    }

    /// Sum (symmetric difference of supports).
    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Gf2Polynomial { terms: out }
    }

    pub fn add_assign(&mut self, other: &Self) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            self.terms = other.terms.clone();
            return;
        }
        *self = self.add(other);
    }

    /// Product with a single packed monomial, truncated at the caps.
    pub fn times_monomial(&self, layout: &MonomialLayout, m: u64) -> Self {
        if m == 0 {
            return self.clone();
        }
        // Adding a constant keeps the order; dropping capped terms keeps it too.
        Gf2Polynomial { terms: self.terms.iter().filter_map(|&t| layout.mul(t, m)).collect() }
    }

    /// Product truncated at the caps.
    pub fn mul(&self, other: &Self, layout: &MonomialLayout) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        if other.len() == 1 {
            return self.times_monomial(layout, other.terms[0]);
        }
        if self.len() == 1 {
            return other.times_monomial(layout, self.terms[0]);
        }
        // Cancel in batches so memory tracks the result, not |self| * |other|.
        let mut acc = Self::zero();
        let mut out = Vec::with_capacity(MUL_BATCH.min(self.len() * other.len()));
        for &a in &self.terms {
            out.extend(other.terms.iter().filter_map(|&b| layout.mul(a, b)));
            if out.len() >= MUL_BATCH {
                acc.add_assign(&Self::from_packed(std::mem::take(&mut out)));
            }
        }
        acc.add_assign(&Self::from_packed(out));
        acc
    }
}

const MUL_BATCH: usize = 1 << 20;

/// Keeps the values that occur an odd number of times in a sorted list.
fn cancel_pairs(sorted: Vec<u64>) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(sorted.len());
    for t in sorted {
        if out.last() == Some(&t) {
            out.pop();
        } else {
            out.push(t);
        }
    }
    out
}
