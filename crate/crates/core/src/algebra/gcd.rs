//! Polynomial gcd: recursive reduction to univariate remainder sequences in
//! one variable at a time, with subresultant coefficient control.
//!
//! `multi_gcd` first strips the common monomial factor, then tries a cheap
//! modular coprimality certificate, and only runs the full subresultant
//! sequence when the certificate cannot be produced.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::hompoly::HomPoly;
use super::mpoly::MPoly;
use super::ring::{Coeff, Fp};
use super::AlgebraError;

/// Make the lexicographically largest term normal (positive or monic).
pub fn normalize<C: Coeff>(p: &MPoly<C>) -> MPoly<C> {
    match p.leading_coeff() {
        None => p.clone(),
        Some(lc) => {
            let u = lc.unit();
            if u.is_one() {
                p.clone()
            } else {
                p.div_scalar(&u).expect("unit divides")
            }
        }
    }
}

/// Primitive part over the coefficient ring, normalized.
pub fn primitive_part<C: Coeff>(p: &MPoly<C>) -> MPoly<C> {
    match p.coeff_content() {
        None => p.clone(),
        Some(c) => normalize(&p.div_scalar(&c).expect("content divides")),
    }
}

/// Normalized gcd of two polynomials, coefficient content included.
pub fn gcd<C: Coeff>(a: &MPoly<C>, b: &MPoly<C>) -> MPoly<C> {
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    let n = a.nvars();
    if a.is_constant() || b.is_constant() {
        let ca = a.coeff_content().expect("nonzero");
        let cb = b.coeff_content().expect("nonzero");
        return normalize(&MPoly::constant(n, ca.gcd(&cb)));
    }
    let ma = a.monomial_content().expect("nonzero");
    let mb = b.monomial_content().expect("nonzero");
    let m: Vec<u32> = ma.iter().zip(&mb).map(|(x, y)| *x.min(y)).collect();
    let a1 = a.div_monomial(&ma);
    let b1 = b.div_monomial(&mb);
    let g = gcd_no_monomial(&a1, &b1);
    normalize(&g.mul_monomial(&m))
}

fn gcd_no_monomial<C: Coeff>(a: &MPoly<C>, b: &MPoly<C>) -> MPoly<C> {
    let n = a.nvars();
    if a.is_constant() || b.is_constant() {
        return gcd(a, b);
    }
    if let Some(g) = C::fast_gcd(a, b) {
        return normalize(&g);
    }
    let v = (0..n)
        .find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
        .expect("nonconstant");
    if a.degree_in(v) == 0 {
        return gcd_with_coeffs(a, b, v);
    }
    if b.degree_in(v) == 0 {
        return gcd_with_coeffs(b, a, v);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let h = subresultant_gcd(&pa, &pb, v);
    normalize(&gcd(&ca, &cb).mul(&h))
}

/// gcd of `a` (free of `v`) with every `v`-coefficient of `b`.
fn gcd_with_coeffs<C: Coeff>(a: &MPoly<C>, b: &MPoly<C>, v: usize) -> MPoly<C> {
    let mut g = a.clone();
    for c in b.coeffs_in(v).iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, c);
        if g.is_constant() {
            break;
        }
    }
    g
}

/// Content with respect to `v`: gcd of the coefficients in the other variables.
fn content_in<C: Coeff>(p: &MPoly<C>, v: usize) -> MPoly<C> {
    let mut it = p.coeffs_in(v).into_iter().filter(|c| !c.is_zero());
    let first = it.next().expect("nonzero");
    let mut g = normalize(&first);
    for c in it {
        if g.is_constant() && g.leading_coeff().is_some_and(|l| l.is_one()) {
            break;
        }
        g = gcd(&g, &c);
    }
    g
}

type UniPoly<C> = Vec<MPoly<C>>;

fn trim<C: Coeff>(p: &mut UniPoly<C>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
fn prem<C: Coeff>(a: &UniPoly<C>, b: &UniPoly<C>) -> UniPoly<C> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.clone();
    let mut e = (a.len() - 1 - db + 1) as i64;
    trim(&mut r);
    while !r.is_empty() && r.len() - 1 >= db {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = r[i + shift].sub(&bc.mul(&lr));
        }
        trim(&mut r);
        e -= 1;
    }
    if e > 0 && !r.is_empty() {
        let one = lb.any_coeff().expect("nonzero").one_like();
        let f = lb.pow(e as u32, &one);
        for c in r.iter_mut() {
            *c = c.mul(&f);
        }
    }
    r
}

/// Primitive gcd in `v` of two polynomials that are primitive in `v`.
fn subresultant_gcd<C: Coeff>(a: &MPoly<C>, b: &MPoly<C>, v: usize) -> MPoly<C> {
    let n = a.nvars();
    let (mut pa, mut pb) = (a.coeffs_in(v), b.coeffs_in(v));
    if pa.len() < pb.len() {
        std::mem::swap(&mut pa, &mut pb);
    }
    let one = a.any_coeff().expect("nonzero").one_like();
    let mut g = MPoly::constant(n, one.clone());
    let mut h = MPoly::constant(n, one.clone());
    loop {
        let d = (pa.len() - pb.len()) as u32;
        let r = prem(&pa, &pb);
        if r.is_empty() {
            let last = MPoly::from_coeffs_in(n, v, &pb);
            let c = content_in(&last, v);
            return normalize(&last.div_exact(&c).expect("content divides"));
        }
        if r.len() == 1 {
            return MPoly::constant(n, one);
        }
        let divisor = g.mul(&h.pow(d, &one));
        pa = pb;
        pb = r
            .iter()
            .map(|c| c.div_exact(&divisor).expect("subresultant division is exact"))
            .collect();
        g = pa.last().expect("nonzero").clone();
        h = match d {
            0 => h,
            1 => g.clone(),
            _ => g
                .pow(d, &one)
                .div_exact(&h.pow(d - 1, &one))
                .expect("subresultant division is exact"),
        };
    }
}

/// Univariate polynomial over `F_q`, coefficients low to high.
fn uni_trim(p: &mut Vec<Fp>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn uni_rem(a: &[Fp], b: &[Fp]) -> Vec<Fp> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let inv = b[db].inv();
    while r.len() > db {
        let k = r.len() - 1;
        let q = r[k].mul(&inv);
        let shift = k - db;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = r[i + shift].sub(&bc.mul(&q));
        }
        uni_trim(&mut r);
    }
    r
}

fn uni_gcd(mut a: Vec<Fp>, mut b: Vec<Fp>) -> Vec<Fp> {
    uni_trim(&mut a);
    uni_trim(&mut b);
    while !b.is_empty() {
        let r = uni_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// Image of `p` in `F_q[x_var]` after substituting `point` for the other
/// variables.
fn univariate_image(p: &MPoly<Fp>, var: usize, point: &[Fp]) -> Vec<Fp> {
    let deg = p.degree_in(var) as usize;
    let zero = point[0].zero_like();
    let mut out = vec![zero; deg + 1];
    for (e, c) in p.terms() {
        let mut t = *c;
        for (j, &k) in e.iter().enumerate() {
            if j != var && k > 0 {
                t = t.mul(&point[j].pow(k as u64));
            }
        }
        out[e[var] as usize] = out[e[var] as usize].add(&t);
    }
    out
}

/// Proves that the polynomials share no nonconstant common factor.
///
/// For each variable `x_k`, all other variables are specialized at random
/// field elements keeping the leading `x_k`-coefficient of one input nonzero.
/// A common factor of positive `x_k`-degree survives specialization with its
/// degree intact, so a constant univariate gcd rules it out. `false` only
/// means no certificate was found.
pub fn certify_coprime<C: Coeff>(polys: &[MPoly<C>], rng: &mut impl Rng) -> bool {
    let Some(first) = polys.first() else {
        return false;
    };
    let n = first.nvars();
    let mut images = Vec::with_capacity(polys.len());
    for p in polys {
        match p.cert_image() {
            Some(im) => images.push(im),
            None => return false,
        }
    }
    let q = match images.iter().find_map(|p| p.any_coeff()) {
        Some(c) => c.modulus(),
        None => return false,
    };
    'vars: for k in 0..n {
        let Some(anchor) = polys.iter().position(|p| p.degree_in(k) > 0) else {
            continue;
        };
        if polys.iter().any(|p| !p.is_zero() && p.degree_in(k) == 0) {
            continue;
        }
        let dk = polys[anchor].degree_in(k) as usize;
        for _ in 0..4 {
            let point: Vec<Fp> = (0..n).map(|_| Fp::new(rng.gen_range(1..q), q)).collect();
            let anchor_image = univariate_image(&images[anchor], k, &point);
            if anchor_image.len() <= dk || anchor_image[dk].is_zero() {
                continue;
            }
            let mut g = anchor_image;
            for (i, im) in images.iter().enumerate() {
                if i == anchor || polys[i].is_zero() {
                    continue;
                }
                g = uni_gcd(g, univariate_image(im, k, &point));
                if g.len() <= 1 {
                    break;
                }
            }
            if g.len() <= 1 {
                continue 'vars;
            }
        }
        return false;
    }
    true
}

/// Primitive, normalized gcd of homogeneous polynomials. Zero inputs are
/// ignored.
pub fn multi_gcd<C: Coeff>(polys: &[HomPoly<C>]) -> Result<HomPoly<C>, AlgebraError> {
    let first = polys.first().ok_or(AlgebraError::EmptyInput)?;
    let n = first.num_vars();
    if polys.iter().any(|p| p.num_vars() != n) {
        return Err(AlgebraError::ArityMismatch {
            expected: n,
            found: polys.iter().map(|p| p.num_vars()).find(|&m| m != n).unwrap_or(n),
        });
    }
    let nonzero: Vec<&HomPoly<C>> = polys.iter().filter(|p| !p.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let one = nonzero[0].poly().any_coeff().expect("nonzero").one_like();
    let mono = nonzero
        .iter()
        .map(|p| p.poly().monomial_content().expect("nonzero"))
        .reduce(|a, b| a.iter().zip(&b).map(|(x, y)| *x.min(y)).collect())
        .expect("nonempty");
    let stripped: Vec<MPoly<C>> = nonzero.iter().map(|p| p.poly().div_monomial(&mono)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0f_9cd);
    let rest = if stripped.iter().any(|p| p.is_constant()) || certify_coprime(&stripped, &mut rng) {
        MPoly::constant(n, one.clone())
    } else {
        // The last variable does not divide every input, so gcd commutes
        // with setting it to one.
        let last = n - 1;
        let dehom: Vec<MPoly<C>> = stripped.iter().map(|p| p.substitute(last, &one)).collect();
        let mut g = dehom[0].clone();
        for p in &dehom[1..] {
            g = gcd(&g, p);
            if g.is_constant() {
                break;
            }
        }
        rehomogenize(&g, last)
    };
    let g = primitive_part(&rest.mul_monomial(&mono));
    HomPoly::from_poly(g)
}

fn rehomogenize<C: Coeff>(p: &MPoly<C>, var: usize) -> MPoly<C> {
    let d = p.total_degree().unwrap_or(0);
    let mut r = MPoly::zero(p.nvars());
    for (e, c) in p.terms() {
        let mut e2 = e.clone();
        e2[var] += d - e.iter().sum::<u32>();
        r.add_term(e2, c.clone());
    }
    r
}
