//! Polynomial factorization over Q: Yun's squarefree decomposition and a
//! complete irreducible factorization.
//!
//! Irreducible splitting works from certified root disks.  A monic rational
//! factor of degree `s` has coefficients that are elementary symmetric
//! functions of `s` of the roots, and their denominators divide the leading
//! coefficient.  Isolating all roots tightly enough therefore pins each
//! candidate coefficient to at most one rational of bounded denominator
//! (through continued fraction convergents), and trial exact division
//! settles the guess.  Subsets are enumerated smallest first, so discovered
//! factors are irreducible.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::poly::PolyQ;
use super::rational::{Int, Rat};
use super::roots::{isolate_roots, rational_roots, CRat};

/// Yun's algorithm: write `p = c * prod_i g_i^i` with the `g_i` squarefree,
/// pairwise coprime, primitive with positive leading coefficient.  Factors
/// with `g_i = 1` are omitted.  Panics on the zero polynomial.
pub fn squarefree_decomposition(p: &PolyQ) -> (Rat, Vec<(PolyQ, usize)>) {
    assert!(!p.is_zero(), "squarefree decomposition of zero");
    let (scale, prim) = p.primitive_normalize();
    if prim.degree() == Some(0) {
        return (scale, Vec::new());
    }
    let mut out: Vec<(PolyQ, usize)> = Vec::new();
    let deriv = prim.derivative();
    let g = prim.gcd(&deriv);
    let mut w = prim.div_exact(&g).expect("gcd divides");
    let mut y = deriv.div_exact(&g).expect("gcd divides");
    let mut i = 1usize;
    while w.degree().is_some_and(|d| d >= 1) {
        let z = y.sub(&w.derivative());
        let gi = w.gcd(&z);
        if gi.degree().is_some_and(|d| d >= 1) {
            let (_, gp) = gi.primitive_normalize();
            out.push((gp, i));
        }
        w = w.div_exact(&gi).expect("gcd divides");
        y = z.div_exact(&gi).expect("gcd divides");
        i += 1;
    }
    // Reconstruct the constant exactly from the product of the factors.
    let mut prod = PolyQ::one();
    for (g, m) in &out {
        prod = prod.mul(&g.pow(*m));
    }
    let c = p.leading().unwrap() / prod.leading().unwrap();
    debug_assert_eq!(&prod.scale(&c), p);
    (c, out)
}

/// Full factorization over Q: `p = c * prod_i f_i^{m_i}` with each `f_i`
/// irreducible, primitive, with positive leading coefficient, sorted by
/// (degree, coefficients).  Panics on the zero polynomial.
pub fn factor_rational(p: &PolyQ) -> (Rat, Vec<(PolyQ, usize)>) {
    let (_, squarefree) = squarefree_decomposition(p);
    let mut factors: Vec<(PolyQ, usize)> = Vec::new();
    for (g, mult) in squarefree {
        for piece in split_squarefree(&g) {
            factors.push((piece, mult));
        }
    }
    factors.sort_by(|a, b| {
        let da = a.0.degree();
        let db = b.0.degree();
        da.cmp(&db).then_with(|| a.0.coeffs().cmp(b.0.coeffs()))
    });
    let mut prod = PolyQ::one();
    for (f, m) in &factors {
        prod = prod.mul(&f.pow(*m));
    }
    let c = p.leading().unwrap() / prod.leading().unwrap();
    debug_assert_eq!(&prod.scale(&c), p);
    (c, factors)
}

/// Irreducible factors of a squarefree primitive polynomial.
fn split_squarefree(g: &PolyQ) -> Vec<PolyQ> {
    let mut out = Vec::new();
    let mut h = g.clone();
    // Strip rational roots; each has multiplicity one here.
    for (root, mult) in rational_roots(&h) {
        debug_assert_eq!(mult, 1);
        let (_, linear) =
            PolyQ::from_coeffs(vec![-root, Rat::one()]).primitive_normalize();
        h = h.div_exact(&linear).expect("rational root divides");
        out.push(linear);
    }
    let (_, mut h) = h.primitive_normalize();
    loop {
        match h.degree() {
            None | Some(0) => break,
            // Degree 2 or 3 with no rational root is irreducible over Q.
            Some(d) if d <= 3 => {
                out.push(h.clone());
                break;
            }
            Some(_) => match try_split(&h) {
                None => {
                    out.push(h.clone());
                    break;
                }
                Some(f) => {
                    let q = h.div_exact(&f).expect("reconstructed factor divides");
                    // The factor came from the smallest splitting subset, so
                    // it is irreducible; keep splitting the quotient.
                    out.push(f);
                    let (_, qn) = q.primitive_normalize();
                    h = qn;
                }
            },
        }
    }
    out
}

/// Lexicographic enumeration of `k`-subsets of `0..n` as index vectors.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            idx: (0..k).collect(),
            done: k > n,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let current = self.idx.clone();
        let k = self.idx.len();
        // Advance: find the rightmost index that can move.
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] + 1 <= self.n - (k - i) {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(current)
    }
}

/// Try to split the squarefree primitive `h` (degree >= 4, no rational
/// roots) into two nonconstant factors.  Returns the smaller factor,
/// primitive with positive leading coefficient.
fn try_split(h: &PolyQ) -> Option<PolyQ> {
    let d = h.degree().unwrap();
    let lead = h.leading().unwrap().numer().abs();
    // Cauchy root bound.
    let lead_abs = h.leading().unwrap().abs();
    let mut max_ratio = Rat::zero();
    for c in h.coeffs() {
        let r = c.abs() / &lead_abs;
        if r > max_ratio {
            max_ratio = r;
        }
    }
    let root_bound = Rat::one() + max_ratio;
    // Tightness: after perturbing each root by rho, an elementary symmetric
    // function of s <= d/2 roots moves by at most
    // s * binom(d, s) * (1 + R)^(d-1) * rho < d * 2^d * (1+R)^d * rho.
    // Choosing rho = 1 / ((4V^2+4) * (2+2R)^d * (d+1)!) keeps that error
    // below 1/(8V^2), which in turn keeps candidate rationals of
    // denominator <= V unique within the acceptance window.
    let v2 = Rat::from_integer(Int::from(4) * &lead * &lead + Int::from(4));
    let mut denom = v2;
    let two_two_r = Rat::from_integer(Int::from(2)) + Rat::from_integer(Int::from(2)) * &root_bound;
    for _ in 0..d {
        denom *= &two_two_r;
    }
    for k in 2..=(d + 1) {
        denom *= Rat::from_integer(Int::from(k as u64));
    }
    let rho = denom.recip();
    let mut eps = rho.clone() * Rat::from_integer(Int::from(d as u64));
    let one_r = Rat::one() + &root_bound;
    for _ in 0..d {
        eps *= Rat::from_integer(Int::from(2)) * &one_r;
    }
    let tau = eps * Rat::from_integer(Int::from(2));

    let roots = isolate_roots(h, &rho);
    debug_assert_eq!(roots.len(), d);
    let centers: Vec<CRat> = roots
        .iter()
        .map(|r| CRat::new(r.root.center_re.clone(), r.root.center_im.clone()))
        .collect();

    for s in 2..=(d / 2) {
        for subset in Combinations::new(d, s) {
            if let Some(f) = reconstruct_factor(h, &centers, &subset, &lead, &tau) {
                return Some(f);
            }
        }
    }
    None
}

/// Expand `prod_{i in subset} (x - centers[i])` in exact complex rational
/// arithmetic and try to read off an integer factor of `h`.
fn reconstruct_factor(
    h: &PolyQ,
    centers: &[CRat],
    subset: &[usize],
    lead: &Int,
    tau: &Rat,
) -> Option<PolyQ> {
    let s = subset.len();
    // Expand the monic product one linear factor at a time; the ascending
    // coefficients are (up to sign) the elementary symmetric functions.
    let mut poly: Vec<CRat> = vec![CRat::new(Rat::one(), Rat::zero())];
    for &i in subset {
        let root = &centers[i];
        let mut next = vec![CRat::zero(); poly.len() + 1];
        for (k, c) in poly.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&c.mul(root));
        }
        poly = next;
    }
    debug_assert_eq!(poly.len(), s + 1);
    // Each coefficient must be nearly real and near a rational with
    // denominator dividing the leading coefficient.
    let mut monic: Vec<Rat> = Vec::with_capacity(s + 1);
    for c in &poly {
        if c.im.abs() > *tau {
            return None;
        }
        let cand = nearest_bounded_rational(&c.re, lead, tau)?;
        monic.push(cand);
    }
    let (_, candidate) = PolyQ::from_coeffs(monic).primitive_normalize();
    if candidate.degree() != Some(s) {
        return None;
    }
    h.div_exact(&candidate).map(|_| candidate)
}

/// The unique rational with denominator at most `bound` within `tau` of `x`,
/// if one exists among the continued fraction convergents of `x`.
fn nearest_bounded_rational(x: &Rat, bound: &Int, tau: &Rat) -> Option<Rat> {
    if x.denom() <= bound {
        return Some(x.clone());
    }
    let mut best: Option<Rat> = None;
    for c in super::roots::convergents(x, bound) {
        let err = (x - &c).abs();
        if err <= *tau {
            best = Some(c);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat_i;
    use proptest::prelude::*;

    #[test]
    fn squarefree_decomposition_reconstructs() {
        // p = 3 (x-1)^2 (x^2+1) (x+2)^3
        let p = PolyQ::from_i64(&[-1, 1])
            .pow(2)
            .mul(&PolyQ::from_i64(&[1, 0, 1]))
            .mul(&PolyQ::from_i64(&[2, 1]).pow(3))
            .scale(&rat_i(3));
        let (c, factors) = squarefree_decomposition(&p);
        assert_eq!(c, rat_i(3));
        let mults: Vec<usize> = factors.iter().map(|f| f.1).collect();
        assert_eq!(mults, vec![1, 2, 3]);
        assert_eq!(factors[0].0, PolyQ::from_i64(&[1, 0, 1]));
        assert_eq!(factors[1].0, PolyQ::from_i64(&[-1, 1]));
        assert_eq!(factors[2].0, PolyQ::from_i64(&[2, 1]));
    }

    #[test]
    fn factor_quadratic_splits() {
        // 6x^2 + x - 2 = (2x - 1)(3x + 2)
        let p = PolyQ::from_i64(&[-2, 1, 6]);
        let (c, factors) = factor_rational(&p);
        assert_eq!(c, rat_i(1));
        assert_eq!(factors.len(), 2);
        assert_eq!(factors[0].0, PolyQ::from_i64(&[-1, 2]));
        assert_eq!(factors[1].0, PolyQ::from_i64(&[2, 3]));
    }

    #[test]
    fn factor_degree_four_without_rational_roots() {
        // (x^2 - 2)(x^2 - 3): irreducible quadratics, no rational roots.
        let p = PolyQ::from_i64(&[-2, 0, 1]).mul(&PolyQ::from_i64(&[-3, 0, 1]));
        let (_, factors) = factor_rational(&p);
        let fs: Vec<&PolyQ> = factors.iter().map(|f| &f.0).collect();
        assert_eq!(fs.len(), 2);
        assert_eq!(*fs[0], PolyQ::from_i64(&[-3, 0, 1]));
        assert_eq!(*fs[1], PolyQ::from_i64(&[-2, 0, 1]));
    }

    #[test]
    fn factor_with_nontrivial_leading_coefficients() {
        // (2x^2 + x + 3)(3x^2 - x + 1): complex roots only.
        let a = PolyQ::from_i64(&[3, 1, 2]);
        let b = PolyQ::from_i64(&[1, -1, 3]);
        let p = a.mul(&b);
        let (c, factors) = factor_rational(&p);
        assert_eq!(c, rat_i(1));
        assert_eq!(factors.len(), 2);
        assert!(factors.iter().any(|f| f.0 == a));
        assert!(factors.iter().any(|f| f.0 == b));
    }

    #[test]
    fn irreducible_quartic_stays_whole() {
        // x^4 + x + 1 is irreducible over Q.
        let p = PolyQ::from_i64(&[1, 1, 0, 0, 1]);
        let (_, factors) = factor_rational(&p);
        assert_eq!(factors.len(), 1);
        assert_eq!(factors[0].0, p);
        assert_eq!(factors[0].1, 1);
    }

    #[test]
    fn degree_six_product_of_three_quadratics() {
        let parts = [
            PolyQ::from_i64(&[1, 0, 1]),
            PolyQ::from_i64(&[-2, 0, 1]),
            PolyQ::from_i64(&[5, -1, 1]),
        ];
        let p = parts[0].mul(&parts[1]).mul(&parts[2]);
        let (_, factors) = factor_rational(&p);
        assert_eq!(factors.len(), 3);
        for part in &parts {
            assert!(factors.iter().any(|f| &f.0 == part), "missing {part}");
        }
    }

    #[test]
    fn combinations_enumerate_lexicographically() {
        let all: Vec<Vec<usize>> = Combinations::new(4, 2).collect();
        assert_eq!(
            all,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(Combinations::new(5, 0).count(), 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn squarefree_parts_multiply_back(
            c1 in proptest::collection::vec(-4i64..5, 2..4),
            c2 in proptest::collection::vec(-4i64..5, 2..3),
            m in 1usize..4,
        ) {
            let a = PolyQ::from_i64(&c1);
            let b = PolyQ::from_i64(&c2);
            prop_assume!(!a.is_zero() && b.degree().is_some_and(|d| d >= 1));
            let p = a.mul(&b.pow(m));
            prop_assume!(p.degree().is_some_and(|d| d >= 1));
            let (c, factors) = squarefree_decomposition(&p);
            let mut prod = PolyQ::constant(c);
            for (g, mult) in &factors {
                // Factors are squarefree: gcd with derivative is constant.
                let gg = g.gcd(&g.derivative());
                prop_assert!(gg.degree() == Some(0));
                prod = prod.mul(&g.pow(*mult));
            }
            prop_assert_eq!(prod, p);
        }

        #[test]
        fn random_quadratic_products_refactor(
            a0 in -6i64..7, a1 in -6i64..7, a2 in 1i64..5,
            b0 in -6i64..7, b1 in -6i64..7, b2 in 1i64..5,
        ) {
            let a = PolyQ::from_i64(&[a0, a1, a2]);
            let b = PolyQ::from_i64(&[b0, b1, b2]);
            let p = a.mul(&b);
            let (c, factors) = factor_rational(&p);
            let mut prod = PolyQ::constant(c);
            for (f, m) in &factors {
                prod = prod.mul(&f.pow(*m));
            }
            prop_assert_eq!(prod, p);
        }
    }
}
