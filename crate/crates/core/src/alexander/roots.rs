//! Exact real-root counting with Sturm sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use super::laurent::LaurentPolynomial;

/// Isolating intervals are refined to at most this width.
pub fn max_interval_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(1024))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootError {
    #[error("the zero polynomial has no finite root set")]
    ZeroPolynomial,
}

/// A positive real root inside `[lo, hi]`; `lo == hi` for exact rational roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    pub exact: bool,
}

impl RootInterval {
    pub fn contains(&self, x: f64) -> bool {
        let lo = self.lo.to_f64().unwrap_or(f64::NAN);
        let hi = self.hi.to_f64().unwrap_or(f64::NAN);
        lo <= x && x <= hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

impl Serialize for RootInterval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RootInterval", 4)?;
        st.serialize_field("lo", &self.lo.to_string())?;
        st.serialize_field("hi", &self.hi.to_string())?;
        st.serialize_field("exact", &self.exact)?;
        let mid = (&self.lo + &self.hi) / BigInt::from(2);
        st.serialize_field("approx", &mid.to_f64())?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootReport {
    /// Degree after normalization.
    pub degree: usize,
    /// Distinct positive real roots.
    pub positive: usize,
    /// Distinct real roots.
    pub real: usize,
    pub positive_with_multiplicity: usize,
    pub real_with_multiplicity: usize,
    /// One interval per distinct positive root, increasing.
    pub intervals: Vec<RootInterval>,
}

impl RootReport {
    /// Every complex root is real and positive (counted with multiplicity).
    pub fn all_roots_real_positive(&self) -> bool {
        self.positive_with_multiplicity == self.degree
    }
}

/// Dense polynomial over the rationals, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
struct QPoly(Vec<BigRational>);

impl QPoly {
    fn from_laurent(p: &LaurentPolynomial) -> Self {
        let mut q = QPoly(
            p.normalized()
                .coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        );
        q.trim();
        q
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> &BigRational {
        self.0.last().expect("nonzero polynomial")
    }

    fn eval(&self, x: &BigRational) -> BigRational {
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    fn derivative(&self) -> Self {
        let mut d = QPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        );
        d.trim();
        d
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        let mut rem = self.0.clone();
        if rem.len() < d.0.len() {
            return (QPoly(vec![]), self.clone());
        }
        let dl = d.0.len();
        let mut q = vec![BigRational::zero(); rem.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let c = &rem[i + dl - 1] / d.lead();
            for (j, dc) in d.0.iter().enumerate() {
                rem[i + j] -= &c * dc;
            }
            q[i] = c;
        }
        let mut q = QPoly(q);
        let mut r = QPoly(rem);
        q.trim();
        r.trim();
        (q, r)
    }

    fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let l = a.lead().clone();
        QPoly(a.0.iter().map(|c| c / &l).collect())
    }
}

struct Sturm(Vec<QPoly>);

impl Sturm {
    fn new(p: &QPoly) -> Self {
        let mut seq = vec![p.clone(), p.derivative()];
        while !seq.last().expect("nonempty").is_zero() {
            let n = seq.len();
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            seq.push(QPoly(r.0.into_iter().map(|c| -c).collect()));
        }
        seq.pop();
        Sturm(seq)
    }

    fn variations(signs: impl Iterator<Item = i32>) -> usize {
        let s: Vec<i32> = signs.filter(|&x| x != 0).collect();
        s.windows(2).filter(|w| w[0] != w[1]).count()
    }

    fn at(&self, x: &BigRational) -> usize {
        Self::variations(self.0.iter().map(|p| sign(&p.eval(x))))
    }

    fn at_pos_inf(&self) -> usize {
        Self::variations(self.0.iter().map(|p| sign(p.lead())))
    }

    fn at_neg_inf(&self) -> usize {
        Self::variations(self.0.iter().map(|p| {
            let s = sign(p.lead());
            if p.degree() % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }
}

fn sign(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Distinct real roots: `(positive, all)`. Needs `p(0) != 0`.
fn count_distinct(p: &QPoly) -> (usize, usize) {
    if p.degree() == 0 {
        return (0, 0);
    }
    let st = Sturm::new(p);
    let inf = st.at_pos_inf();
    (st.at(&BigRational::zero()) - inf, st.at_neg_inf() - inf)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let e = &n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out
}

/// Positive rational roots of an integer polynomial with nonzero constant term.
fn positive_rational_roots(p: &LaurentPolynomial) -> Vec<BigRational> {
    let p = p.normalized();
    let c = p.coeffs();
    if c.len() < 2 {
        return vec![];
    }
    let q = QPoly::from_laurent(&p);
    let mut roots: Vec<BigRational> = Vec::new();
    for num in divisors(&c[0]) {
        for den in divisors(c.last().expect("nonempty")) {
            if !num.gcd(&den).is_one() {
                continue;
            }
            let r = BigRational::new(num.clone(), den);
            if q.eval(&r).is_zero() && !roots.contains(&r) {
                roots.push(r);
            }
        }
    }
    roots.sort();
    roots
}

/// Exact counts and isolating intervals for the positive real roots of `f`.
/// Roots at `t = 0` are ignored: `f` is first normalized to lowest exponent 0.
pub fn positive_real_roots(f: &LaurentPolynomial) -> Result<RootReport, RootError> {
    if f.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let q = QPoly::from_laurent(f);
    let degree = q.degree();
    // g_0 = q, g_{i+1} = gcd(g_i, g_i'): a root of multiplicity m divides
    // exactly g_0..g_{m-1}.
    let mut layers = vec![q.clone()];
    while layers.last().expect("nonempty").degree() > 0 {
        let g = layers.last().expect("nonempty");
        let next = g.gcd(&g.derivative());
        layers.push(next);
    }
    let squarefree = |g: &QPoly| {
        let d = g.gcd(&g.derivative());
        g.div_rem(&d).0
    };
    let mut pos_mult = 0;
    let mut real_mult = 0;
    for g in &layers {
        let (p, r) = count_distinct(&squarefree(g));
        pos_mult += p;
        real_mult += r;
    }
    let sf = squarefree(&q);
    let (positive, real) = count_distinct(&sf);

    let exact = positive_rational_roots(f);
    let mut rest = sf.clone();
    for r in &exact {
        let lin = QPoly(vec![-r.clone(), BigRational::one()]);
        rest = rest.div_rem(&lin).0;
    }
    let mut intervals: Vec<RootInterval> = exact
        .iter()
        .map(|r| RootInterval {
            lo: r.clone(),
            hi: r.clone(),
            exact: true,
        })
        .collect();
    if rest.degree() > 0 {
        let st = Sturm::new(&rest);
        // Cauchy bound on root size.
        let lead = rest.lead().abs();
        let bound = BigRational::one()
            + rest
                .0
                .iter()
                .map(|c| c.abs() / &lead)
                .max()
                .expect("nonempty");
        isolate(&st, BigRational::zero(), bound, &mut intervals);
    }
    intervals.sort_by(|a, b| a.lo.cmp(&b.lo));
    debug_assert_eq!(intervals.len(), positive);
    Ok(RootReport {
        degree,
        positive,
        real,
        positive_with_multiplicity: pos_mult,
        real_with_multiplicity: real_mult,
        intervals,
    })
}

/// Splits `(lo, hi]` until each piece holds one root and is narrow enough.
/// The polynomial has no rational roots, so midpoints are never roots.
fn isolate(st: &Sturm, lo: BigRational, hi: BigRational, out: &mut Vec<RootInterval>) {
    let n = st.at(&lo) - st.at(&hi);
    if n == 0 {
        return;
    }
    if n == 1 && &hi - &lo <= max_interval_width() {
        out.push(RootInterval {
            lo,
            hi,
            exact: false,
        });
        return;
    }
    let mid = (&lo + &hi) / BigInt::from(2);
    isolate(st, lo, mid.clone(), out);
    isolate(st, mid, hi, out);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(s: &str) -> RootReport {
        positive_real_roots(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn rational_roots_are_exact() {
        let r = report("2 - 5t + 2t^2");
        assert_eq!(r.positive, 2);
        assert!(r.intervals.iter().all(|i| i.exact));
        assert_eq!(r.intervals[0].lo, BigRational::new(1.into(), 2.into()));
        assert_eq!(r.intervals[1].lo, BigRational::from_integer(2.into()));
    }

    #[test]
    fn no_real_roots() {
        let r = report("2 - 3t + 2t^2");
        assert_eq!((r.positive, r.real), (0, 0));
        let r = report("1 - 3t + 5t^2 - 3t^3 + t^4");
        assert_eq!((r.positive, r.real), (0, 0));
    }

    #[test]
    fn irrational_roots_isolated() {
        let r = report("1 - 3t + 3t^2 - 3t^3 + t^4");
        assert_eq!(r.positive, 2);
        // The smaller root is the reciprocal of the larger one (palindromic
        // polynomial): 1/2.15372... = 0.464312..., not 0.446431.
        assert!(r.intervals[0].contains(0.464312));
        assert!(!r.intervals[0].contains(0.446431));
        assert!(r.intervals[1].contains(2.15372));
        assert!(r
            .intervals
            .iter()
            .all(|i| i.width() <= max_interval_width()));
    }

    #[test]
    fn multiplicities() {
        // (t - 1)^2 (t + 2)
        let r = report("2 - 3t + t^3");
        assert_eq!((r.positive, r.real), (1, 2));
        assert_eq!(
            (r.positive_with_multiplicity, r.real_with_multiplicity),
            (2, 3)
        );
        assert!(!r.all_roots_real_positive());
        let r = report("1 - 3t + t^2");
        assert!(r.all_roots_real_positive());
    }

    #[test]
    fn constants_have_no_roots() {
        let r = report("1");
        assert_eq!((r.degree, r.positive, r.real), (0, 0, 0));
        assert!(r.all_roots_real_positive());
        assert_eq!(
            positive_real_roots(&LaurentPolynomial::zero()),
            Err(RootError::ZeroPolynomial)
        );
    }
}
