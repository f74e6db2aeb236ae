//! Hilbert functions of homogeneous ideals by exact linear algebra in each
//! degree.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::forms::{monomials, GradedIdeal, HomogeneousPoly};

type SparseRow = Vec<(u32, BigInt)>;

fn entry(row: &SparseRow, col: u32) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |e| e.0)
        .ok()
        .map(|i| &row[i].1)
}

/// `a*x - b*y` on sparse rows, dropping zeros.
fn combine(a: &BigInt, x: &SparseRow, b: &BigInt, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (col, v) = match (x.get(i), y.get(j)) {
            (Some(p), Some(q)) if p.0 == q.0 => {
                i += 1;
                j += 1;
                (p.0, a * &p.1 - b * &q.1)
            }
            (Some(p), Some(q)) if p.0 < q.0 => {
                i += 1;
                (p.0, a * &p.1)
            }
            (Some(p), None) => {
                i += 1;
                (p.0, a * &p.1)
            }
            (_, Some(q)) => {
                j += 1;
                (q.0, -(b * &q.1))
            }
            (None, None) => unreachable!(),
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    out
}

fn content(row: &SparseRow) -> BigInt {
    row.iter().fold(BigInt::zero(), |g, (_, c)| g.gcd(c))
}

/// Reduced row echelon form over the integers, built one row at a time.
///
/// Every stored row is primitive, has a positive entry at its pivot column,
/// and is zero at every other pivot column. Pivots are the least nonzero
/// column of the reduced incoming row, so the result depends only on the
/// order of insertion.
#[derive(Default)]
struct Rref {
    rows: BTreeMap<u32, SparseRow>,
}

impl Rref {
    /// Reduces `v` modulo the stored rows; `den` tracks the scalar that
    /// `v` was multiplied by.
    fn reduce(&self, v: &mut SparseRow, den: &mut BigInt) {
        let cols: Vec<u32> = v
            .iter()
            .map(|e| e.0)
            .filter(|c| self.rows.contains_key(c))
            .collect();
        for c in cols {
            let Some(x) = entry(v, c).cloned() else {
                continue;
            };
            let piv = &self.rows[&c];
            let a = entry(piv, c).expect("pivot entry");
            let g = a.gcd(&x);
            let (a, x) = (a / &g, x / &g);
            *v = combine(&a, v, &x, piv);
            *den *= &a;
        }
        let g = content(v).gcd(den);
        if !g.is_zero() && !g.is_one() {
            for e in v.iter_mut() {
                e.1 = &e.1 / &g;
            }
            *den = &*den / &g;
        }
    }

    /// Returns whether the rank grew.
    fn insert(&mut self, mut v: SparseRow) -> bool {
        v.retain(|e| !e.1.is_zero());
        v.sort_by_key(|e| e.0);
        let mut den = BigInt::one();
        self.reduce(&mut v, &mut den);
        let Some(&(lead, ref lv)) = v.first() else {
            return false;
        };
        let g = content(&v);
        let g = if lv.is_negative() { -g } else { g };
        for e in v.iter_mut() {
            e.1 = &e.1 / &g;
        }
        let lv = v[0].1.clone();
        for row in self.rows.values_mut() {
            if let Some(x) = entry(row, lead).cloned() {
                let h = lv.gcd(&x);
                let mut r = combine(&(&lv / &h), row, &(x / &h), &v);
                let c = content(&r);
                for e in r.iter_mut() {
                    e.1 = &e.1 / &c;
                }
                *row = r;
            }
        }
        self.rows.insert(lead, v);
        true
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// Integer coefficients of a primitive multiple of `g`, keyed by exponent.
fn integer_gen(g: &HomogeneousPoly) -> Vec<(Vec<u32>, BigInt)> {
    g.primitive()
        .terms()
        .iter()
        .map(|(e, c)| (e.clone(), c.to_integer()))
        .collect()
}

fn index_of(mons: &[Vec<u32>]) -> HashMap<Vec<u32>, u32> {
    mons.iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i as u32))
        .collect()
}

/// Dimension of the degree-`t` part `I_t`, by the Macaulay matrix whose rows
/// are `m * g` for every generator `g` and monomial `m` of degree `t - deg g`.
pub fn graded_piece_dim(ideal: &GradedIdeal, t: u32) -> usize {
    let nv = ideal.nvars();
    let cols = index_of(&monomials(nv, t));
    let mut ech = Rref::default();
    for g in ideal.gens() {
        if g.degree() > t {
            continue;
        }
        let coeffs = integer_gen(g);
        for m in monomials(nv, t - g.degree()) {
            let row = coeffs
                .iter()
                .map(|(e, c)| {
                    let prod: Vec<u32> = e.iter().zip(&m).map(|(a, b)| a + b).collect();
                    (cols[&prod], c.clone())
                })
                .collect();
            ech.insert(row);
        }
    }
    ech.rank()
}

/// Normal form of a monomial in `S_t / I_t`: integer coordinates over a
/// common denominator.
#[derive(Clone)]
struct NormalForm {
    coords: SparseRow,
    den: BigInt,
}

/// Hilbert function of `S / I`, produced one degree at a time.
///
/// `S_{t+1} / I_{t+1}` is the quotient of `S_1 (x) S_t/I_t` by the Koszul
/// relations `z_i (x) [m/z_i] - z_j (x) [m/z_j]` and the generators of degree
/// `t+1`. The work is proportional to `HF(t)`, not to the number of monomials.
pub struct HilbertFunction<'a> {
    ideal: &'a GradedIdeal,
    next_t: u32,
    basis_len: u32,
    nf: HashMap<Vec<u32>, NormalForm>,
}

impl<'a> HilbertFunction<'a> {
    pub fn new(ideal: &'a GradedIdeal) -> Self {
        HilbertFunction {
            ideal,
            next_t: 0,
            basis_len: 0,
            nf: HashMap::new(),
        }
    }

    fn start(&mut self) -> u64 {
        let nv = self.ideal.nvars();
        if self.ideal.gens().iter().any(|g| g.degree() == 0) {
            self.basis_len = 0;
        } else {
            self.basis_len = 1;
            let one = NormalForm {
                coords: vec![(0, BigInt::one())],
                den: BigInt::one(),
            };
            self.nf.insert(vec![0; nv], one);
        }
        self.basis_len as u64
    }

    fn step(&mut self, t: u32) -> u64 {
        let nv = self.ideal.nvars();
        let mons = monomials(nv, t);
        let (nf, basis_len) = (&self.nf, self.basis_len);
        // coordinate (i, s) of S_1 (x) S_{t-1}/I_{t-1} is i * basis_len + s
        let lift = |i: usize, m: &[u32]| -> NormalForm {
            let mut e = m.to_vec();
            e[i] -= 1;
            match nf.get(&e) {
                Some(f) => {
                    let off = i as u32 * basis_len;
                    NormalForm {
                        coords: f.coords.iter().map(|(c, v)| (c + off, v.clone())).collect(),
                        den: f.den.clone(),
                    }
                }
                None => NormalForm {
                    coords: Vec::new(),
                    den: BigInt::one(),
                },
            }
        };
        let mut rref = Rref::default();
        let mut pre: HashMap<Vec<u32>, NormalForm> = HashMap::with_capacity(mons.len());
        for m in &mons {
            let vars: Vec<usize> = (0..nv).filter(|&i| m[i] > 0).collect();
            let base = lift(vars[0], m);
            for &j in &vars[1..] {
                let other = lift(j, m);
                rref.insert(combine(&base.den, &other.coords, &other.den, &base.coords));
            }
            pre.insert(m.clone(), base);
        }
        for g in self.ideal.gens().iter().filter(|g| g.degree() == t) {
            let terms = integer_gen(g);
            let den = terms
                .iter()
                .fold(BigInt::one(), |l, (e, _)| l.lcm(&pre[e].den));
            let mut row: SparseRow = Vec::new();
            for (e, c) in &terms {
                let f = &pre[e];
                row = combine(&BigInt::one(), &row, &-(c * (&den / &f.den)), &f.coords);
            }
            rref.insert(row);
        }
        let total = nv as u32 * basis_len;
        let free: Vec<u32> = (0..total).filter(|c| !rref.rows.contains_key(c)).collect();
        let pos: HashMap<u32, u32> = free
            .iter()
            .enumerate()
            .map(|(k, &c)| (c, k as u32))
            .collect();
        let mut next = HashMap::with_capacity(mons.len());
        if !free.is_empty() {
            for (m, mut f) in pre {
                rref.reduce(&mut f.coords, &mut f.den);
                let coords = f.coords.into_iter().map(|(c, v)| (pos[&c], v)).collect();
                next.insert(m, NormalForm { coords, den: f.den });
            }
        }
        self.basis_len = free.len() as u32;
        self.nf = next;
        self.basis_len as u64
    }
}

impl Iterator for HilbertFunction<'_> {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let t = self.next_t;
        self.next_t += 1;
        Some(if t == 0 { self.start() } else { self.step(t) })
    }
}

/// `HF(t)` for `t = 0..=t_max`.
pub fn hilbert_function(ideal: &GradedIdeal, t_max: u32) -> Vec<u64> {
    HilbertFunction::new(ideal)
        .take(t_max as usize + 1)
        .collect()
}

/// Polynomial in `t` with rational coefficients, constant term first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(pub Vec<BigRational>);

impl QPoly {
    fn trimmed(mut v: Vec<BigRational>) -> Self {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        QPoly(v)
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, t: i64) -> BigRational {
        let x = BigRational::from_integer(BigInt::from(t));
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    /// Lagrange interpolation through `(t_i, y_i)`.
    pub fn interpolate(points: &[(i64, BigRational)]) -> Self {
        let mut acc = vec![BigRational::zero(); points.len()];
        for (i, (ti, yi)) in points.iter().enumerate() {
            // basis polynomial prod_{j != i} (t - t_j) / (t_i - t_j)
            let mut basis = vec![BigRational::one()];
            let mut denom = BigRational::one();
            for (j, (tj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let tj = BigRational::from_integer(BigInt::from(*tj));
                let mut next = vec![BigRational::zero(); basis.len() + 1];
                for (k, c) in basis.iter().enumerate() {
                    next[k + 1] += c;
                    next[k] -= c * &tj;
                }
                basis = next;
                denom *= BigRational::from_integer(BigInt::from(*ti)) - tj;
            }
            let scale = yi / denom;
            for (k, c) in basis.into_iter().enumerate() {
                acc[k] += c * &scale;
            }
        }
        Self::trimmed(acc)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let coef = if a.is_integer() {
                a.to_integer().to_string()
            } else {
                format!("({a})")
            };
            match k {
                0 => write!(f, "{coef}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{coef}")?;
                    }
                    write!(f, "t")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Hilbert function values and the certified Hilbert polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertProfile {
    pub nvars: usize,
    /// `HF(t)` for `t = 0..=t_max`.
    pub values: Vec<u64>,
    pub polynomial: QPoly,
    /// Least `t` from which `HF` agrees with the polynomial up to `t_max`.
    pub stable_from: u32,
    /// Dimension of the projective scheme; `None` when it is empty.
    pub scheme_dim: Option<usize>,
    pub scheme_deg: u64,
}

impl HilbertProfile {
    pub fn to_json(&self) -> Value {
        json!({
            "values": self.values,
            "polynomial": self.polynomial.to_string(),
            "dim": self.scheme_dim,
            "deg": self.scheme_deg,
            "stable_from": self.stable_from,
        })
    }
}

/// Computes `HF(t)` for `t <= t_max` and certifies the Hilbert polynomial.
///
/// The polynomial is interpolated through the last `nvars` values and must
/// also match at least `nvars + 1` earlier consecutive values; otherwise the
/// result is [`Error::Unstabilized`].
pub fn hilbert_profile(ideal: &GradedIdeal, t_max: u32) -> Result<HilbertProfile> {
    let nv = ideal.nvars();
    if nv == 0 {
        return invalid("ideal needs at least one variable");
    }
    certify(nv, hilbert_function(ideal, t_max))
}

/// Certifies the Hilbert polynomial from `values[t] = HF(t)`.
fn certify(nv: usize, values: Vec<u64>) -> Result<HilbertProfile> {
    let n = nv as u32 - 1;
    let nodes = nv as u32;
    let extra = n + 2;
    let t_max = values.len() as u32 - 1;
    if t_max + 1 < nodes + extra {
        return Err(Error::Unstabilized {
            t_max: t_max as usize,
        });
    }
    let points: Vec<(i64, BigRational)> = ((t_max + 1 - nodes)..=t_max)
        .map(|t| {
            (
                t as i64,
                BigRational::from_integer(BigInt::from(values[t as usize])),
            )
        })
        .collect();
    let poly = QPoly::interpolate(&points);
    let mut stable_from = t_max + 1 - nodes;
    while stable_from > 0 {
        let t = stable_from - 1;
        if poly.eval(t as i64) != BigRational::from_integer(BigInt::from(values[t as usize])) {
            break;
        }
        stable_from = t;
    }
    if t_max + 1 - nodes - stable_from < extra {
        return Err(Error::Unstabilized {
            t_max: t_max as usize,
        });
    }
    let scheme_dim = poly.degree();
    let scheme_deg = match scheme_dim {
        None => 0,
        Some(dim) => {
            let fact: BigInt = (1..=dim as u64).map(BigInt::from).product();
            let deg = &poly.0[dim] * BigRational::from_integer(fact);
            if !deg.is_integer() || !deg.is_positive() {
                return Err(Error::Inconsistent(format!(
                    "Hilbert polynomial {poly} has non-integral degree"
                )));
            }
            deg.to_integer()
                .to_u64()
                .ok_or_else(|| Error::Inconsistent("degree overflows".into()))?
        }
    };
    Ok(HilbertProfile {
        nvars: nv,
        values,
        polynomial: poly,
        stable_from,
        scheme_dim,
        scheme_deg,
    })
}

/// Largest `t_max` tried by [`scheme_degree_dim`].
pub const DEFAULT_T_CAP: u32 = 40;

/// `(dim, deg)` of the projective scheme cut out by `ideal`, extending the
/// Hilbert function one degree at a time until the polynomial is certified or
/// `t_cap` is reached. The empty scheme is reported as `(-1, 0)`.
pub fn scheme_degree_dim(ideal: &GradedIdeal, t_cap: u32) -> Result<(i64, u64)> {
    let p = stabilized_profile(ideal, t_cap)?;
    Ok((p.scheme_dim.map_or(-1, |d| d as i64), p.scheme_deg))
}

/// The profile at the least `t_max <= t_cap` that certifies stabilization.
pub fn stabilized_profile(ideal: &GradedIdeal, t_cap: u32) -> Result<HilbertProfile> {
    let nv = ideal.nvars();
    if nv == 0 {
        return invalid("ideal needs at least one variable");
    }
    let max_gen = ideal.gens().iter().map(|g| g.degree()).max().unwrap_or(0) as usize;
    let mut values = Vec::new();
    for v in HilbertFunction::new(ideal).take(t_cap as usize + 1) {
        values.push(v);
        if values.len() > max_gen && values.len() > 2 * nv {
            match certify(nv, values.clone()) {
                Err(Error::Unstabilized { .. }) => {}
                other => return other,
            }
        }
    }
    Err(Error::Unstabilized {
        t_max: t_cap as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::parse_ideal;

    fn binom_u64(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let k = k.min(n - k);
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        acc as u64
    }

    fn ideal(s: &str) -> GradedIdeal {
        parse_ideal(s, Some(4)).unwrap()
    }

    #[test]
    fn piece_dims() {
        let zero = GradedIdeal::new(4, []).unwrap();
        assert_eq!(graded_piece_dim(&zero, 3), 0);
        let max = ideal("z0, z1, z2, z3");
        assert_eq!(graded_piece_dim(&max, 1), 4);
        let two_lines = ideal("z0*z2, z0*z3, z1*z2, z1*z3");
        assert_eq!(graded_piece_dim(&two_lines, 2), 4);
        let hf = hilbert_function(&two_lines, 6);
        for t in 0..7u32 {
            let total = binom_u64(3 + t as u64, 3);
            assert_eq!(
                hf[t as usize],
                total - graded_piece_dim(&two_lines, t) as u64
            );
        }
    }

    #[test]
    fn two_lines_profile() {
        let p = hilbert_profile(&ideal("z0*z2, z0*z3, z1*z2, z1*z3"), 14).unwrap();
        assert_eq!(p.polynomial.to_string(), "2t + 2");
        assert!(p.stable_from <= 3);
        assert_eq!((p.scheme_dim, p.scheme_deg), (Some(1), 2));
    }

    #[test]
    fn line_and_quadrics() {
        let p = hilbert_profile(&ideal("z0, z1"), 12).unwrap();
        assert_eq!(p.polynomial.to_string(), "t + 1");
        let ci = hilbert_profile(&ideal("z0^2 + z1*z2, z3^2 - z0*z1"), 14).unwrap();
        assert_eq!(ci.polynomial.to_string(), "4t");
        assert_eq!((ci.scheme_dim, ci.scheme_deg), (Some(1), 4));
    }

    #[test]
    fn unit_and_zero_ideals() {
        let unit = parse_ideal("1", Some(4)).unwrap();
        let p = hilbert_profile(&unit, 12).unwrap();
        assert_eq!(p.scheme_dim, None);
        assert_eq!(p.scheme_deg, 0);
        let zero = GradedIdeal::new(3, []).unwrap();
        let p = hilbert_profile(&zero, 12).unwrap();
        assert_eq!((p.scheme_dim, p.scheme_deg), (Some(2), 1));
        assert_eq!(scheme_degree_dim(&unit, DEFAULT_T_CAP).unwrap(), (-1, 0));
    }

    #[test]
    fn too_small_window_is_unstabilized() {
        let i = ideal("z0*z2, z0*z3, z1*z2, z1*z3");
        assert!(matches!(
            hilbert_profile(&i, 5),
            Err(Error::Unstabilized { t_max: 5 })
        ));
        // a high-degree generator stabilizes late
        let late = ideal("z0^12, z1");
        assert!(matches!(
            hilbert_profile(&late, 12),
            Err(Error::Unstabilized { .. })
        ));
        assert_eq!(scheme_degree_dim(&late, DEFAULT_T_CAP).unwrap(), (1, 12));
    }

    #[test]
    fn interpolation() {
        let pts: Vec<_> = (0..4)
            .map(|t| (t, BigRational::from_integer(BigInt::from(t * t + 1))))
            .collect();
        let p = QPoly::interpolate(&pts);
        assert_eq!(p.to_string(), "t^2 + 1");
        let half = QPoly::interpolate(&[
            (0, BigRational::zero()),
            (1, BigRational::one()),
            (2, BigRational::from_integer(3.into())),
        ]);
        assert_eq!(half.to_string(), "(1/2)t^2 + (1/2)t");
    }
}
