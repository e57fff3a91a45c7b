//! Finite p-adic integers and their vertical/horizontal ordering.

use std::cmp::Ordering;

use crate::error::{domain, Result};

/// A natural number in base p, least significant digit first, without
/// trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PAdicInt {
    p: u32,
    digits: Vec<u32>,
}

fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

impl PAdicInt {
    pub fn new(p: u32, digits: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return domain(format!("p = {p} is not prime"));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= p) {
            return domain(format!("digit {d} out of range for p = {p}"));
        }
        let mut digits = digits.to_vec();
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Ok(Self { p, digits })
    }

    pub fn from_u64(p: u32, mut value: u64) -> Result<Self> {
        let mut digits = Vec::new();
        while value > 0 {
            digits.push((value % u64::from(p)) as u32);
            value /= u64::from(p);
        }
        Self::new(p, &digits)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }

    /// Index of the first nonzero digit; `None` for zero.
    pub fn valuation(&self) -> Option<usize> {
        self.digits.iter().position(|&d| d != 0)
    }

    /// |x|_p = p^(-v); zero for zero.
    pub fn norm(&self) -> f64 {
        match self.valuation() {
            Some(v) => f64::from(self.p).powi(-(v as i32)),
            None => 0.0,
        }
    }
}

/// Less means `x` comes before `y`: smaller norm first, then digits compared
/// from the common valuation upward.
pub fn padic_compare(x: &PAdicInt, y: &PAdicInt) -> Result<Ordering> {
    if x.p != y.p {
        return domain(format!(
            "cannot compare a {}-adic with a {}-adic number",
            x.p, y.p
        ));
    }
    let (vx, vy) = match (x.valuation(), y.valuation()) {
        (None, None) => return Ok(Ordering::Equal),
        (None, Some(_)) => return Ok(Ordering::Less),
        (Some(_), None) => return Ok(Ordering::Greater),
        (Some(a), Some(b)) => (a, b),
    };
    if vx != vy {
        return Ok(vy.cmp(&vx));
    }
    let len = x.digits.len().max(y.digits.len());
    let digit = |n: &PAdicInt, i: usize| n.digits.get(i).copied().unwrap_or(0);
    Ok((vx..len)
        .map(|i| digit(x, i).cmp(&digit(y, i)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal))
}
