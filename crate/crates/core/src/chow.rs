//! Intersection arithmetic in the Chow ring `Z[h]/(h^{n+1})` of projective n-space.
//!
//! Everything here is exact over arbitrary-precision integers. The closed-form
//! degree of a singular scheme (`singular_degree_formula`) is evaluated as the
//! literal double sum over exponent compositions, while `tangent_degeneracy_degree`
//! reaches the same number through power-series division, so the two routes can
//! check each other.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// A class `c_0 + c_1 h + ... + c_n h^n` in the Chow ring of `P^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChowClass {
    n: usize,
    coeffs: Vec<BigInt>,
}

impl ChowClass {
    /// Builds a class from its leading coefficients; missing ones are zero and
    /// anything past `h^n` is dropped.
    pub fn new(n: usize, coeffs: impl IntoIterator<Item = BigInt>) -> Self {
        let mut c: Vec<BigInt> = coeffs.into_iter().take(n + 1).collect();
        c.resize(n + 1, BigInt::zero());
        ChowClass { n, coeffs: c }
    }

    pub fn from_i64(n: usize, coeffs: &[i64]) -> Self {
        Self::new(n, coeffs.iter().map(|&c| BigInt::from(c)))
    }

    pub fn one(n: usize) -> Self {
        Self::from_i64(n, &[1])
    }

    pub fn zero(n: usize) -> Self {
        Self::new(n, std::iter::empty())
    }

    /// `1 + a h`, the total Chern class of `O(a)`.
    pub fn linear(n: usize, a: i64) -> Self {
        Self::from_i64(n, &[1, a])
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `h^i` (zero past `h^n`).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse in the truncated power-series ring. Requires constant term 1.
    pub fn inverse(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return invalid(format!(
                "Chow class inverse needs constant term 1, got {}",
                self.coeffs[0]
            ));
        }
        let mut inv = vec![BigInt::zero(); self.n + 1];
        inv[0] = BigInt::one();
        for j in 1..=self.n {
            let mut s = BigInt::zero();
            for i in 1..=j {
                s += &self.coeffs[i] * &inv[j - i];
            }
            inv[j] = -s;
        }
        Ok(ChowClass {
            n: self.n,
            coeffs: inv,
        })
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(
            self.n, other.n,
            "Chow classes live on different projective spaces"
        );
    }
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    write!(f, "h")?;
                    if i > 1 {
                        write!(f, "^{i}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a ChowClass> for &'a ChowClass {
    type Output = ChowClass;
    fn add(self, rhs: &ChowClass) -> ChowClass {
        self.check_same(rhs);
        ChowClass {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a ChowClass> for &'a ChowClass {
    type Output = ChowClass;
    fn sub(self, rhs: &ChowClass) -> ChowClass {
        self.check_same(rhs);
        ChowClass {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &ChowClass {
    type Output = ChowClass;
    fn neg(self) -> ChowClass {
        ChowClass {
            n: self.n,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl<'a> Mul<&'a ChowClass> for &'a ChowClass {
    type Output = ChowClass;
    fn mul(self, rhs: &ChowClass) -> ChowClass {
        self.check_same(rhs);
        let mut out = vec![BigInt::zero(); self.n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(self.n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        ChowClass {
            n: self.n,
            coeffs: out,
        }
    }
}

/// A split bundle `O(a_1) + ... + O(a_m)` on `P^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitBundle {
    n: usize,
    twists: Vec<i64>,
}

impl SplitBundle {
    pub fn new(n: usize, twists: Vec<i64>) -> Result<Self> {
        if n == 0 {
            return invalid("ambient dimension must be positive");
        }
        if twists.is_empty() {
            return invalid("split bundle needs at least one summand");
        }
        let mut twists = twists;
        twists.sort_unstable_by(|a, b| b.cmp(a));
        Ok(SplitBundle { n, twists })
    }

    /// `O(a)^{⊕ m}`.
    pub fn uniform(n: usize, a: i64, m: usize) -> Result<Self> {
        Self::new(n, vec![a; m])
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Twists in non-increasing order.
    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn c1(&self) -> i64 {
        self.twists.iter().sum()
    }

    pub fn twisted(&self, t: i64) -> Self {
        SplitBundle {
            n: self.n,
            twists: self.twists.iter().map(|a| a + t).collect(),
        }
    }
}

impl fmt::Display for SplitBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut i = 0;
        let mut first = true;
        while i < self.twists.len() {
            let a = self.twists[i];
            let run = self.twists[i..].iter().take_while(|&&b| b == a).count();
            if !first {
                write!(f, "+")?;
            }
            first = false;
            write!(f, "O({a})")?;
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Numerical data of a distribution: ambient dimension, dimension `r`,
/// codimension `k = n - r` and degree `d`.
///
/// The degree is tied to the bundles by `c_1(F) = r - d` for the tangent sheaf
/// and by the twist `O(d + k + 1)` of the singular ideal in `Λ^k N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionParams {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub d: i64,
}

impl DistributionParams {
    pub fn new(n: usize, r: usize, d: i64) -> Result<Self> {
        if r == 0 || r >= n {
            return invalid(format!(
                "distribution dimension r={r} must lie in 1..={}",
                n.saturating_sub(1)
            ));
        }
        if d < 0 {
            return invalid(format!("distribution degree must be nonnegative, got {d}"));
        }
        Ok(DistributionParams { n, r, k: n - r, d })
    }

    /// Reads the degree off a split tangent sheaf via `c_1(F) = r - d`.
    pub fn from_split_tangent(tangent: &SplitBundle) -> Result<Self> {
        let n = tangent.ambient_dim();
        let r = tangent.rank();
        Self::new(n, r, r as i64 - tangent.c1())
    }

    /// Reads the degree off a Pfaff bundle `E = N^*` of rank `k` via `c_1(E) = -(d + k + 1)`.
    pub fn from_pfaff(pfaff: &SplitBundle) -> Result<Self> {
        let n = pfaff.ambient_dim();
        let k = pfaff.rank();
        if k >= n {
            return invalid(format!("Pfaff bundle rank {k} must be below n={n}"));
        }
        Self::new(n, n - k, -pfaff.c1() - k as i64 - 1)
    }

    /// `c_1` of the tangent sheaf.
    pub fn tangent_c1(&self) -> i64 {
        self.r as i64 - self.d
    }

    /// Twist `d + k + 1` with `Λ^k N = I_Z(d + k + 1)`.
    pub fn ideal_twist(&self) -> i64 {
        self.d + self.k as i64 + 1
    }

    /// `c_1` of the Pfaff bundle.
    pub fn pfaff_c1(&self) -> i64 {
        -self.ideal_twist()
    }
}

/// Total Chern class `∏ (1 + a_i h)`.
pub fn chern_total(bundle: &SplitBundle) -> ChowClass {
    let n = bundle.ambient_dim();
    bundle
        .twists()
        .iter()
        .fold(ChowClass::one(n), |acc, &a| &acc * &ChowClass::linear(n, a))
}

/// Total Chern class of `T_{P^n}`, `(1 + h)^{n+1}`.
pub fn chern_tangent(n: usize) -> ChowClass {
    ChowClass::linear(n, 1).pow(n as u32 + 1)
}

/// Total Chern class of `Ω^1_{P^n}`, `(1 - h)^{n+1}`.
pub fn chern_cotangent(n: usize) -> ChowClass {
    ChowClass::linear(n, -1).pow(n as u32 + 1)
}

/// `c(num - den) = num / den` in the truncated ring.
pub fn chern_difference(num: &ChowClass, den: &ChowClass) -> Result<ChowClass> {
    if num.ambient_dim() != den.ambient_dim() {
        return invalid("Chow classes live on different projective spaces");
    }
    Ok(num * &den.inverse()?)
}

/// Degree of the singular scheme of a distribution with split tangent sheaf
/// `⊕ O(-d_i)`, evaluated as the closed double sum
/// `Σ_{i=0}^{n-r+1} C(n+1, n-r+1-i) Σ_{|α|=i} d^α`.
pub fn singular_degree_formula(n: usize, r: usize, d_list: &[i64]) -> Result<BigInt> {
    if r == 0 || r + 1 > n {
        return invalid(format!("r={r} must lie in 1..={}", n.saturating_sub(1)));
    }
    if d_list.len() != r {
        return invalid(format!("expected {r} degrees, got {}", d_list.len()));
    }
    if let Some(bad) = d_list.iter().find(|&&d| d <= 0) {
        return invalid(format!("all d_i must be positive, got {bad}"));
    }
    Ok(degree_double_sum(n, d_list))
}

fn degree_double_sum(n: usize, d_list: &[i64]) -> BigInt {
    let r = d_list.len();
    let top = n - r + 1;
    let mut total = BigInt::zero();
    for i in 0..=top {
        let mut inner = BigInt::zero();
        for_each_composition(i, r, &mut |alpha| {
            let mut term = BigInt::one();
            for (&d, &e) in d_list.iter().zip(alpha) {
                term *= BigInt::from(d).pow(e as u32);
            }
            inner += term;
        });
        total += binomial(n + 1, top - i) * inner;
    }
    total
}

fn for_each_composition(total: usize, parts: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(rem: usize, idx: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if idx + 1 == buf.len() {
            buf[idx] = rem;
            f(buf);
            return;
        }
        for e in 0..=rem {
            buf[idx] = e;
            rec(rem - e, idx + 1, buf, f);
        }
    }
    let mut buf = vec![0; parts];
    rec(total, 0, &mut buf, f);
}

pub(crate) fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Degree of the degeneracy locus of a map `F -> T_{P^n}` from a split
/// bundle: the `h^{n-r+1}` coefficient of `c(T)/c(F)`. No positivity is
/// required of the twists.
pub fn tangent_degeneracy_degree(tangent: &SplitBundle) -> Result<BigInt> {
    let n = tangent.ambient_dim();
    let r = tangent.rank();
    if r >= n {
        return invalid(format!("rank {r} must be below n={n}"));
    }
    let quotient = chern_difference(&chern_tangent(n), &chern_total(tangent))?;
    Ok(quotient.coeff(n - r + 1))
}

/// `1 + d + ... + d^{k+1}`, the singular degree of a linear pullback of a
/// degree-`d` foliation by curves on `P^{k+1}`.
pub fn pullback_degree(n: usize, k: usize, d: i64) -> Result<BigInt> {
    if k == 0 || k >= n {
        return invalid(format!(
            "codimension k={k} must lie in 1..={}",
            n.saturating_sub(1)
        ));
    }
    if d < 0 {
        return invalid(format!("degree must be nonnegative, got {d}"));
    }
    let d = BigInt::from(d);
    let mut acc = BigInt::zero();
    let mut pow = BigInt::one();
    for _ in 0..=k + 1 {
        acc += &pow;
        pow *= &d;
    }
    Ok(acc)
}

/// Porteous degree of the degeneracy locus of a Pfaff system `E -> Ω^1`:
/// the coefficient of `h^{n - rank E + 1}` in `c(Ω^1)/c(E)`.
pub fn porteous_singular_degree(n: usize, pfaff: &SplitBundle) -> Result<BigInt> {
    if pfaff.ambient_dim() != n {
        return invalid("Pfaff bundle lives on a different projective space");
    }
    let e = pfaff.rank();
    if e + 1 > n {
        return invalid(format!(
            "Pfaff bundle rank {e} must be at most n-1={}",
            n - 1
        ));
    }
    let codim = (n - e + 1).min(n);
    let quotient = chern_difference(&chern_cotangent(n), &chern_total(pfaff))?;
    let c = quotient.coeff(codim);
    if !c.is_positive() {
        return Err(Error::ExpectedCodimension(format!(
            "c_{codim}(Ω^1 - E) = {c} for E = {pfaff}"
        )));
    }
    Ok(c)
}
