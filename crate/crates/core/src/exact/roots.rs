//! Certified complex root isolation.
//!
//! The strategy is float-seeded but exact-certified.  Each squarefree factor
//! is handed to an Aberth-Ehrlich iteration in `f64` for cheap approximate
//! roots; every approximation is then refined by Newton steps in exact
//! complex rational arithmetic, rounded dyadically to keep coordinate sizes
//! bounded.  At a point `w` the inequality
//! `min_i |w - z_i| <= deg(q) * |q(w)/q'(w)|` (from the partial fraction
//! expansion of `q'/q`) turns the exact Newton correction into a certified
//! inclusion radius, so each returned disk provably contains a root.  Once
//! the disks of all `d` approximations are pairwise disjoint, pigeonhole
//! puts exactly one root in each.
//!
//! Rational roots are found by divisor enumeration when the edge
//! coefficients factor comfortably, and otherwise by isolating all roots
//! tightly enough that continued fraction convergents of the disk centers
//! can only hit a bounded-denominator rational in one way.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use super::factor::squarefree_decomposition;
use super::poly::PolyQ;
use super::rational::{dyadic_round, rat_to_f64, sqrt_upper, Int, Rat};

/// A closed disk `|z - center| <= radius` in the complex plane with exact
/// rational data.  `radius == 0` states the center is exactly a root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBox {
    pub center_re: Rat,
    pub center_im: Rat,
    pub radius: Rat,
}

impl ComplexBox {
    pub fn point(re: Rat, im: Rat) -> Self {
        ComplexBox {
            center_re: re,
            center_im: im,
            radius: Rat::zero(),
        }
    }

    /// Disjointness of closed disks, decided exactly:
    /// `|c1 - c2|^2 > (r1 + r2)^2`.
    pub fn is_disjoint(&self, other: &ComplexBox) -> bool {
        let dre = &self.center_re - &other.center_re;
        let dim = &self.center_im - &other.center_im;
        let dist2 = &dre * &dre + &dim * &dim;
        let rsum = &self.radius + &other.radius;
        dist2 > &rsum * &rsum
    }

    /// Whether the disk meets the real axis.
    pub fn touches_real_axis(&self) -> bool {
        self.center_im.abs() <= self.radius
    }

    /// Whether the disk contains the origin.
    pub fn contains_zero(&self) -> bool {
        let dist2 = &self.center_re * &self.center_re + &self.center_im * &self.center_im;
        dist2 <= &self.radius * &self.radius
    }

    /// Upper bound on `|z|` over the disk.
    pub fn abs_upper(&self) -> Rat {
        let c2 = &self.center_re * &self.center_re + &self.center_im * &self.center_im;
        sqrt_upper(&c2, 64) + &self.radius
    }

    /// Lower bound on `|z|` over the disk (clamped at zero).
    pub fn abs_lower(&self) -> Rat {
        let c2 = &self.center_re * &self.center_re + &self.center_im * &self.center_im;
        let lower = sqrt_upper(&c2, 64) - Rat::new(Int::one(), Int::one() << 62) - &self.radius;
        if lower.is_negative() {
            Rat::zero()
        } else {
            lower
        }
    }

    pub fn center_f64(&self) -> (f64, f64) {
        (rat_to_f64(&self.center_re), rat_to_f64(&self.center_im))
    }
}

/// A certified root disk with the multiplicity of the root it contains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub root: ComplexBox,
    pub multiplicity: usize,
}

/// Exact complex rational arithmetic, internal to root refinement and
/// factor reconstruction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct CRat {
    pub re: Rat,
    pub im: Rat,
}

impl CRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        CRat { re, im }
    }

    pub fn zero() -> Self {
        CRat::new(Rat::zero(), Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &CRat) -> CRat {
        CRat::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn sub(&self, o: &CRat) -> CRat {
        CRat::new(&self.re - &o.re, &self.im - &o.im)
    }

    pub fn mul(&self, o: &CRat) -> CRat {
        CRat::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn div(&self, o: &CRat) -> CRat {
        let n2 = o.norm_sqr();
        assert!(!n2.is_zero(), "complex division by zero");
        CRat::new(
            (&self.re * &o.re + &self.im * &o.im) / &n2,
            (&self.im * &o.re - &self.re * &o.im) / &n2,
        )
    }

    pub fn norm_sqr(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn round(&self, bits: u32) -> CRat {
        CRat::new(dyadic_round(&self.re, bits), dyadic_round(&self.im, bits))
    }
}

/// Horner evaluation of `p` at a complex rational point.
pub(crate) fn ceval(p: &PolyQ, z: &CRat) -> CRat {
    let mut acc = CRat::zero();
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(z);
        acc.re += c;
    }
    acc
}

#[derive(Clone, Copy)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }

    fn add(self, o: C64) -> C64 {
        C64::new(self.re + o.re, self.im + o.im)
    }

    fn sub(self, o: C64) -> C64 {
        C64::new(self.re - o.re, self.im - o.im)
    }

    fn mul(self, o: C64) -> C64 {
        C64::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }

    fn div(self, o: C64) -> C64 {
        let n = o.re * o.re + o.im * o.im;
        C64::new(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )
    }

    fn abs(self) -> f64 {
        libm::hypot(self.re, self.im)
    }
}

fn horner_c64(cs: &[f64], z: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for &c in cs.iter().rev() {
        acc = acc.mul(z);
        acc.re += c;
    }
    acc
}

/// Aberth-Ehrlich simultaneous iteration on the scaled float image of `g`.
/// Returns one approximation per root; accuracy is whatever f64 affords.
fn aberth_seeds(g: &PolyQ, angle_offset: f64) -> Vec<C64> {
    let d = g.degree().expect("aberth on constant polynomial");
    // Scale coefficients so the largest magnitude is 1: the float image
    // stays in range no matter how large the exact coefficients are.
    let max_mag = g
        .coeffs()
        .iter()
        .map(|c| c.abs())
        .max()
        .expect("nonzero polynomial");
    let cs: Vec<f64> = g
        .coeffs()
        .iter()
        .map(|c| rat_to_f64(&(c / &max_mag)))
        .collect();
    let dcs: Vec<f64> = cs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as f64)
        .collect();
    let lead = if cs[d].abs() < 1e-300 { 1e-300 } else { cs[d] };
    let cauchy =
        (1.0 + cs[..d].iter().fold(0.0f64, |m, c| m.max((c / lead).abs()))).min(1e40);
    let mut z: Vec<C64> = (0..d)
        .map(|j| {
            let t = 2.0 * core::f64::consts::PI * (j as f64 + 0.3) / d as f64 + angle_offset;
            C64::new(
                0.7 * cauchy * libm::cos(t),
                0.7 * cauchy * libm::sin(t),
            )
        })
        .collect();
    for _ in 0..400 {
        let mut moved = 0.0f64;
        for j in 0..d {
            let pv = horner_c64(&cs, z[j]);
            let dv = horner_c64(&dcs, z[j]);
            if dv.abs() == 0.0 {
                z[j] = z[j].add(C64::new(1e-7, 1e-7));
                moved = f64::INFINITY;
                continue;
            }
            let newton = pv.div(dv);
            let mut s = C64::new(0.0, 0.0);
            for (k, zk) in z.iter().enumerate() {
                if k != j {
                    let diff = z[j].sub(*zk);
                    if diff.abs() > 0.0 {
                        s = s.add(C64::new(1.0, 0.0).div(diff));
                    }
                }
            }
            let denom = C64::new(1.0, 0.0).sub(newton.mul(s));
            let w = if denom.abs() > 0.0 { newton.div(denom) } else { newton };
            z[j] = z[j].sub(w);
            moved = moved.max(w.abs() / (1.0 + z[j].abs()));
        }
        if moved < 1e-13 {
            break;
        }
    }
    z
}

const CERT_SQRT_BITS: u32 = 64;

/// Bits needed so that `2^-bits <= target`, padded.
fn target_bits(target: &Rat) -> u32 {
    let num_bits = target.numer().magnitude().bits() as i64;
    let den_bits = target.denom().magnitude().bits() as i64;
    (den_bits - num_bits + 2).clamp(8, 1 << 20) as u32
}

/// Newton refinement of one approximation of a root of the squarefree `g`.
/// Returns a center and a certified inclusion radius `<= target`.
fn refine_root(g: &PolyQ, gd: &PolyQ, seed: &CRat, target: &Rat) -> (CRat, Rat) {
    let deg = Rat::from_integer(Int::from(g.degree().unwrap() as u64));
    // The sqrt bound is rounded up on a dyadic grid; keep the grid finer
    // than the target or the certificate can never reach it.
    let cert_bits = CERT_SQRT_BITS.max(target_bits(target) + 32);
    let mut prec = target_bits(target) + 64;
    let mut w = seed.round(prec);
    for _ in 0..1000 {
        let der = ceval(gd, &w);
        if der.is_zero() {
            // Landed exactly on a critical point; nudge deterministically.
            w.re += Rat::new(Int::one(), Int::one() << (prec / 2));
            continue;
        }
        let val = ceval(g, &w);
        if val.is_zero() {
            return (w, Rat::zero());
        }
        let step = val.div(&der);
        let cert = &deg * sqrt_upper(&step.norm_sqr(), cert_bits);
        if cert <= *target {
            return (w, cert);
        }
        w = w.sub(&step).round(prec);
        prec = prec.saturating_add(16);
    }
    panic!("root refinement failed to converge");
}

struct Tracked {
    box_: ComplexBox,
    multiplicity: usize,
    // None for exact rational roots of linear factors.
    factor: Option<usize>,
}

/// Isolate all complex roots of `p` into pairwise disjoint certified disks
/// of radius at most `max_radius`, sorted by (real, imaginary) center.
/// Multiplicities come from the squarefree decomposition.  Panics on the
/// zero polynomial.
pub fn isolate_roots(p: &PolyQ, max_radius: &Rat) -> Vec<IsolatedRoot> {
    assert!(!p.is_zero(), "root isolation of the zero polynomial");
    assert!(max_radius > &Rat::zero(), "max_radius must be positive");
    if p.degree() == Some(0) {
        return Vec::new();
    }
    let (_, squarefree) = squarefree_decomposition(p);
    let mut factors: Vec<(PolyQ, PolyQ)> = Vec::new(); // (g, g')
    let mut tracked: Vec<Tracked> = Vec::new();
    let mut target = max_radius.clone();
    for (g, mult) in squarefree {
        let d = g.degree().unwrap();
        if d == 1 {
            let root = -g.coeff(0) / g.coeff(1);
            tracked.push(Tracked {
                box_: ComplexBox::point(root, Rat::zero()),
                multiplicity: mult,
                factor: None,
            });
            continue;
        }
        let gd = g.derivative();
        let idx = factors.len();
        for (j, seed) in aberth_seeds(&g, 0.0).into_iter().enumerate() {
            let seed = if seed.re.is_finite() && seed.im.is_finite() {
                CRat::new(
                    Rat::from_float(seed.re).unwrap_or_else(Rat::zero),
                    Rat::from_float(seed.im).unwrap_or_else(Rat::zero),
                )
            } else {
                // Degenerate float image; fall back to a spread of exact
                // starting points and let Newton do all the work.
                CRat::new(Rat::from_integer(Int::from(j as u64 + 1)), Rat::one())
            };
            let (center, radius) = refine_root(&g, &gd, &seed, &target);
            tracked.push(Tracked {
                box_: ComplexBox {
                    center_re: center.re,
                    center_im: center.im,
                    radius,
                },
                multiplicity: mult,
                factor: Some(idx),
            });
        }
        factors.push((g, gd));
    }
    // Shrink radii until all disks are pairwise disjoint.  Roots are
    // distinct (squarefree factors are coprime), so this terminates.
    for round in 0.. {
        let mut overlapping = vec![false; tracked.len()];
        let mut any = false;
        for i in 0..tracked.len() {
            for j in i + 1..tracked.len() {
                if !tracked[i].box_.is_disjoint(&tracked[j].box_) {
                    overlapping[i] = true;
                    overlapping[j] = true;
                    any = true;
                }
            }
        }
        if !any {
            break;
        }
        assert!(round < 200, "root disks failed to separate");
        target /= Rat::from_integer(Int::from(256));
        for (i, t) in tracked.iter_mut().enumerate() {
            if !overlapping[i] {
                continue;
            }
            let fi = t.factor.expect("exact root disks cannot overlap");
            let (g, gd) = &factors[fi];
            let seed = CRat::new(t.box_.center_re.clone(), t.box_.center_im.clone());
            let (center, radius) = refine_root(g, gd, &seed, &target);
            t.box_ = ComplexBox {
                center_re: center.re,
                center_im: center.im,
                radius,
            };
        }
    }
    let mut out: Vec<IsolatedRoot> = tracked
        .into_iter()
        .map(|t| IsolatedRoot {
            root: t.box_,
            multiplicity: t.multiplicity,
        })
        .collect();
    out.sort_by(|a, b| {
        (&a.root.center_re, &a.root.center_im).cmp(&(&b.root.center_re, &b.root.center_im))
    });
    out
}

fn u64_divisors(n: u64) -> Option<Vec<u64>> {
    // Trial division up to 1e5, then deterministic Miller-Rabin and Pollard
    // rho for what remains.  Gives up (None) only if the divisor list would
    // explode.
    let mut primes: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    let push = |p: u64, primes: &mut Vec<(u64, u32)>| {
        if let Some(last) = primes.last_mut() {
            if last.0 == p {
                last.1 += 1;
                return;
            }
        }
        primes.push((p, 1));
    };
    let mut d = 2u64;
    while d <= 100_000 && d * d <= m {
        while m % d == 0 {
            push(d, &mut primes);
            m /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![m];
    while let Some(v) = stack.pop() {
        if v == 1 {
            continue;
        }
        if is_prime_u64(v) {
            push(v, &mut primes);
            continue;
        }
        let f = pollard_rho(v);
        stack.push(f);
        stack.push(v / f);
    }
    primes.sort_unstable();
    // Merge repeated primes produced out of order.
    let mut merged: Vec<(u64, u32)> = Vec::new();
    for (p, e) in primes {
        if let Some(last) = merged.last_mut() {
            if last.0 == p {
                last.1 += e;
                continue;
            }
        }
        merged.push((p, e));
    }
    let count: u64 = merged.iter().map(|&(_, e)| e as u64 + 1).product();
    if count > 4096 {
        return None;
    }
    let mut divs = vec![1u64];
    for (p, e) in merged {
        let base = divs.clone();
        let mut pe = 1u64;
        for _ in 0..e {
            pe = pe.checked_mul(p)?;
            for b in &base {
                divs.push(b.checked_mul(pe)?);
            }
        }
    }
    divs.sort_unstable();
    Some(divs)
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for u64 with the standard 12-witness base set.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// One nontrivial factor of the odd composite `n` (Brent's variant).
fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u64(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Continued fraction convergents of `x` with denominator at most `bound`.
pub(crate) fn convergents(x: &Rat, bound: &Int) -> Vec<Rat> {
    use num_integer::Integer;
    let mut out = Vec::new();
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    let (mut p0, mut q0) = (Int::zero(), Int::one());
    let (mut p1, mut q1) = (Int::one(), Int::zero());
    // p/q accumulate as (a p1 + p0)/(a q1 + q0) with the floor quotients.
    while !den.is_zero() {
        let (a, r) = num.div_mod_floor(&den);
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > *bound {
            break;
        }
        out.push(Rat::new(p2.clone(), q2.clone()));
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        num = den;
        den = r;
    }
    out
}

/// All rational roots of `p` with multiplicities, sorted ascending.
/// Panics on the zero polynomial.
pub fn rational_roots(p: &PolyQ) -> Vec<(Rat, usize)> {
    assert!(!p.is_zero(), "rational roots of the zero polynomial");
    let (_, mut h) = p.primitive_normalize();
    let mut out: Vec<(Rat, usize)> = Vec::new();
    if h.degree() == Some(0) {
        return out;
    }
    // Factor out the root at zero first so the trailing coefficient is
    // nonzero for the divisor search.
    let x = PolyQ::x();
    let v = h.order_of(&x);
    if v > 0 {
        out.push((Rat::zero(), v));
        for _ in 0..v {
            h = h.div_exact(&x).unwrap();
        }
    }
    if h.degree() == Some(0) {
        return out;
    }
    let candidates = rational_root_candidates(&h);
    for cand in candidates {
        let linear = PolyQ::from_coeffs(vec![-cand.clone(), Rat::one()]);
        let mut mult = 0;
        while let Some(q) = h.div_exact(&linear) {
            h = q;
            mult += 1;
            if h.is_zero() {
                break;
            }
        }
        if mult > 0 {
            out.push((cand, mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Candidate rational roots of a primitive integer polynomial with nonzero
/// trailing coefficient.  The list is a superset of the true rational roots.
fn rational_root_candidates(h: &PolyQ) -> Vec<Rat> {
    let trail = h.coeff(0).numer().magnitude().clone();
    let lead = h.leading().unwrap().numer().magnitude().clone();
    if trail.bits() <= 63 && lead.bits() <= 63 {
        let t64 = trail.to_u64_digits().first().copied().unwrap_or(1);
        let l64 = lead.to_u64_digits().first().copied().unwrap_or(1);
        if let (Some(tds), Some(lds)) = (u64_divisors(t64), u64_divisors(l64)) {
            if tds.len() * lds.len() <= 100_000 {
                let mut cands = Vec::new();
                for &den in &lds {
                    for &num in &tds {
                        for sign in [1i64, -1] {
                            cands.push(Rat::new(
                                Int::from(sign) * Int::from(num),
                                Int::from(den),
                            ));
                        }
                    }
                }
                cands.sort();
                cands.dedup();
                cands.retain(|c| h.eval(c).is_zero());
                return cands;
            }
        }
    }
    // Fallback: isolate every root tightly enough that a rational root with
    // denominator at most |lead| is forced to be a convergent of the center
    // of the disk containing it.
    let lead_int = Int::from_biguint(num_bigint::Sign::Plus, lead);
    let rho = Rat::new(
        Int::one(),
        Int::from(4) * &lead_int * &lead_int + Int::from(4),
    );
    let mut cands = Vec::new();
    for ir in isolate_roots(h, &rho) {
        if !ir.root.touches_real_axis() {
            continue;
        }
        for c in convergents(&ir.root.center_re, &lead_int) {
            if h.eval(&c).is_zero() {
                cands.push(c);
            }
        }
    }
    cands.sort();
    cands.dedup();
    cands
}
