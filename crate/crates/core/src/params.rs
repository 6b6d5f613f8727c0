//! The integers that parametrize a decomposition problem.

use crate::error::ParamsError;
use crate::Rational;

/// `k` spanning-tree forests, target bound `d`, and the derived `ell` and
/// `d_prime` (the component bound actually guaranteed for the special forest).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Params {
    pub k: usize,
    pub d: usize,
    pub ell: usize,
    pub d_prime: usize,
}

/// ell = floor((d-1)/(k+1)); d' = d + ceil(k*ell*(d/(k+1) - (ell+1)/2)).
pub fn compute_params(k: usize, d: usize) -> Result<Params, ParamsError> {
    if k == 0 || d == 0 {
        return Err(ParamsError::NonPositive { k, d });
    }
    let ell = (d - 1) / (k + 1);
    // k*ell*(d/(k+1) - (ell+1)/2) = k*ell*(2d - (ell+1)(k+1)) / (2(k+1))
    let num = (k * ell) as i64 * (2 * d as i64 - ((ell + 1) * (k + 1)) as i64);
    let den = 2 * (k + 1) as i64;
    let extra = div_ceil(num, den);
    let d_prime = (d as i64 + extra) as usize;
    Ok(Params { k, d, ell, d_prime })
}

fn div_ceil(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    let q = a.div_euclid(b);
    if a.rem_euclid(b) == 0 {
        q
    } else {
        q + 1
    }
}

impl Params {
    /// k + d/(d+k+1), the largest fractional arboricity the decomposition handles.
    pub fn threshold(&self) -> Rational {
        let (k, d) = (self.k as i64, self.d as i64);
        Rational::new(k * (d + k + 1) + d, d + k + 1)
    }

    /// d/(d+k+1), the red density bound of an exploration subgraph.
    pub fn red_density(&self) -> Rational {
        Rational::new(self.d as i64, (self.d + self.k + 1) as i64)
    }

    /// d + (k/2)(d/(k+1))^2, the closed-form upper bound on d'.
    pub fn d_prime_upper_bound(&self) -> Rational {
        let (k, d) = (self.k as i64, self.d as i64);
        Rational::from_integer(d) + Rational::new(k * d * d, 2 * (k + 1) * (k + 1))
    }
}
