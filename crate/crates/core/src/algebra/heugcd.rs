//! Heuristic gcd over the integers: evaluate one variable at a large
//! integer, take the gcd of the images recursively, rebuild a candidate from
//! its balanced base-`xi` digits and keep it only if it divides both inputs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::mpoly::MPoly;

const ATTEMPTS: usize = 6;
/// Give up before the evaluated images get this large.
const MAX_IMAGE_BITS: u64 = 1 << 16;

fn content(p: &MPoly<BigInt>) -> BigInt {
    p.terms().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c))
}

fn max_norm(p: &MPoly<BigInt>) -> BigInt {
    p.terms().map(|(_, c)| c.abs()).max().unwrap_or_default()
}

fn balanced_rem(c: &BigInt, xi: &BigInt, half: &BigInt) -> BigInt {
    let r = c.mod_floor(xi);
    if &r > half {
        r - xi
    } else {
        r
    }
}

/// Read the balanced base-`xi` digits of `h` as coefficients of `var`.
fn reconstruct(h: &MPoly<BigInt>, xi: &BigInt, var: usize) -> Option<MPoly<BigInt>> {
    let n = h.nvars();
    let half = xi / 2u32;
    let mut out = MPoly::zero(n);
    let mut rest = h.clone();
    let mut k = 0u32;
    while !rest.is_zero() {
        let digit = MPoly::from_terms(
            n,
            rest.terms().map(|(e, c)| (e.clone(), balanced_rem(c, xi, &half))),
        );
        for (e, c) in digit.terms() {
            let mut e2 = e.clone();
            e2[var] = k;
            out.add_term(e2, c.clone());
        }
        rest = rest.sub(&digit).div_scalar(xi)?;
        k += 1;
        if k > 1 << 12 {
            return None;
        }
    }
    Some(out)
}

/// gcd with integer content included, or `None` when the heuristic gives up.
pub(crate) fn heu_gcd(a: &MPoly<BigInt>, b: &MPoly<BigInt>) -> Option<MPoly<BigInt>> {
    let n = a.nvars();
    if a.is_zero() || b.is_zero() {
        return None;
    }
    let (ca, cb) = (content(a), content(b));
    let g0 = ca.gcd(&cb);
    let Some(var) = (0..n).find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0) else {
        return Some(MPoly::constant(n, g0));
    };
    let a1 = a.div_scalar(&ca)?;
    let b1 = b.div_scalar(&cb)?;
    let deg = a1.degree_in(var).max(b1.degree_in(var)) as u64;
    let mut xi: BigInt = max_norm(&a1).min(max_norm(&b1)) * 2u32 + 29u32;
    for _ in 0..ATTEMPTS {
        if xi.bits() * (deg + 1) > MAX_IMAGE_BITS {
            return None;
        }
        let fa = a1.substitute(var, &xi);
        let fb = b1.substitute(var, &xi);
        if !fa.is_zero() && !fb.is_zero() {
            let h = heu_gcd(&fa, &fb)?;
            if let Some(cand) = reconstruct(&h, &xi, var) {
                if !cand.is_zero() {
                    let c = content(&cand);
                    let cand = cand.div_scalar(&c)?;
                    if a1.div_exact(&cand).is_some() && b1.div_exact(&cand).is_some() {
                        return Some(if g0.is_one() { cand } else { cand.scale(&g0) });
                    }
                }
            }
        }
        xi = xi * 73794u32 / 27011u32;
    }
    None
}
