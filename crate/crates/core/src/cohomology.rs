//! Cohomology of direct sums of line bundles and twisted cotangent powers on
//! `P^n`, computed exactly from Bott's formula.
//!
//! Each atom has a finite set of twists where its intermediate cohomology is
//! nonzero, and half-lines for `H^0` and `H^n`. Tables carry these supports as
//! per-row windows, so "vanishes at every twist" is answered by scanning a
//! finite range.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Map, Value};

use crate::chow::SplitBundle;
use crate::error::{invalid, Error, Result};

/// A cohomology dimension that is either known exactly or bracketed.
///
/// `hi == None` means no upper bound is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Dim {
    lo: u64,
    hi: Option<u64>,
}

impl Dim {
    pub const ZERO: Dim = Dim { lo: 0, hi: Some(0) };
    pub const UNBOUNDED: Dim = Dim { lo: 0, hi: None };

    pub fn exact(v: u64) -> Self {
        Dim { lo: v, hi: Some(v) }
    }

    /// `[lo, hi]`; panics if `lo > hi`.
    pub fn interval(lo: u64, hi: Option<u64>) -> Self {
        if let Some(h) = hi {
            assert!(lo <= h, "empty interval [{lo}, {h}]");
        }
        Dim { lo, hi }
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> Option<u64> {
        self.hi
    }

    pub fn exact_value(&self) -> Option<u64> {
        (self.hi == Some(self.lo)).then_some(self.lo)
    }

    pub fn is_exact(&self) -> bool {
        self.exact_value().is_some()
    }

    pub fn is_zero(&self) -> bool {
        self.hi == Some(0)
    }

    /// True when the value is certainly positive.
    pub fn is_nonzero(&self) -> bool {
        self.lo > 0
    }

    /// True when the interval contains a positive value.
    pub fn may_be_nonzero(&self) -> bool {
        !self.is_zero()
    }

    pub fn intersect(&self, other: &Dim) -> Option<Dim> {
        let lo = self.lo.max(other.lo);
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        match hi {
            Some(h) if h < lo => None,
            _ => Some(Dim { lo, hi }),
        }
    }

    pub fn contains(&self, v: u64) -> bool {
        v >= self.lo && self.hi.is_none_or(|h| v <= h)
    }

    pub fn to_json(&self) -> Value {
        match (self.exact_value(), self.hi) {
            (Some(v), _) => json!(v),
            (None, hi) => json!([self.lo, hi]),
        }
    }

    pub fn from_json(v: &Value) -> Result<Dim> {
        if let Some(x) = v.as_u64() {
            return Ok(Dim::exact(x));
        }
        if let Some(arr) = v.as_array() {
            if arr.len() == 2 {
                let lo = arr[0].as_u64();
                let hi = if arr[1].is_null() {
                    Some(None)
                } else {
                    arr[1].as_u64().map(Some)
                };
                if let (Some(lo), Some(hi)) = (lo, hi) {
                    if hi.is_none_or(|h| lo <= h) {
                        return Ok(Dim::interval(lo, hi));
                    }
                }
            }
        }
        invalid(format!(
            "bad dimension entry {v}: expected a nonnegative integer or [lo, hi]"
        ))
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.exact_value(), self.hi) {
            (Some(v), _) => write!(f, "{v}"),
            (None, Some(h)) => write!(f, "[{}, {}]", self.lo, h),
            (None, None) => write!(f, "[{}, inf)", self.lo),
        }
    }
}

/// A range of twists, possibly empty and possibly unbounded on either side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Window {
    Empty,
    Range { lo: Option<i64>, hi: Option<i64> },
}

impl Window {
    pub const ALL: Window = Window::Range { lo: None, hi: None };

    pub fn finite(lo: i64, hi: i64) -> Self {
        if lo > hi {
            Window::Empty
        } else {
            Window::Range {
                lo: Some(lo),
                hi: Some(hi),
            }
        }
    }

    pub fn point(t: i64) -> Self {
        Window::finite(t, t)
    }

    pub fn at_least(lo: i64) -> Self {
        Window::Range {
            lo: Some(lo),
            hi: None,
        }
    }

    pub fn at_most(hi: i64) -> Self {
        Window::Range {
            lo: None,
            hi: Some(hi),
        }
    }

    pub fn contains(&self, t: i64) -> bool {
        match *self {
            Window::Empty => false,
            Window::Range { lo, hi } => lo.is_none_or(|l| t >= l) && hi.is_none_or(|h| t <= h),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Window::Empty)
    }

    pub fn bounds(&self) -> Option<(Option<i64>, Option<i64>)> {
        match *self {
            Window::Empty => None,
            Window::Range { lo, hi } => Some((lo, hi)),
        }
    }

    pub fn is_bounded(&self) -> bool {
        match *self {
            Window::Empty => true,
            Window::Range { lo, hi } => lo.is_some() && hi.is_some(),
        }
    }

    /// Smallest window containing both.
    pub fn hull(&self, other: &Window) -> Window {
        match (*self, *other) {
            (Window::Empty, w) | (w, Window::Empty) => w,
            (Window::Range { lo: a, hi: b }, Window::Range { lo: c, hi: d }) => Window::Range {
                lo: a.zip(c).map(|(x, y)| x.min(y)),
                hi: b.zip(d).map(|(x, y)| x.max(y)),
            },
        }
    }

    pub fn intersect(&self, other: &Window) -> Window {
        match (*self, *other) {
            (Window::Empty, _) | (_, Window::Empty) => Window::Empty,
            (Window::Range { lo: a, hi: b }, Window::Range { lo: c, hi: d }) => {
                let lo = match (a, c) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, None) => x,
                    (None, y) => y,
                };
                let hi = match (b, d) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, None) => x,
                    (None, y) => y,
                };
                match (lo, hi) {
                    (Some(l), Some(h)) if l > h => Window::Empty,
                    _ => Window::Range { lo, hi },
                }
            }
        }
    }

    pub fn shifted(&self, s: i64) -> Window {
        match *self {
            Window::Empty => Window::Empty,
            Window::Range { lo, hi } => Window::Range {
                lo: lo.map(|l| l + s),
                hi: hi.map(|h| h + s),
            },
        }
    }

    fn to_json(self) -> Value {
        match self {
            Window::Empty => json!("empty"),
            Window::Range { lo, hi } => json!({ "lo": lo, "hi": hi }),
        }
    }

    fn from_json(v: &Value) -> Result<Window> {
        if v.as_str() == Some("empty") {
            return Ok(Window::Empty);
        }
        let obj = v
            .as_object()
            .ok_or_else(|| Error::InvalidInput(format!("bad window {v}")))?;
        let bound = |key: &str| -> Result<Option<i64>> {
            match obj.get(key) {
                None | Some(Value::Null) => Ok(None),
                Some(x) => x
                    .as_i64()
                    .map(Some)
                    .ok_or_else(|| Error::InvalidInput(format!("bad window bound {x}"))),
            }
        };
        let (lo, hi) = (bound("lo")?, bound("hi")?);
        match (lo, hi) {
            (Some(l), Some(h)) if l > h => invalid(format!("window [{l}, {h}] is reversed")),
            _ => Ok(Window::Range { lo, hi }),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Window::Empty => write!(f, "empty"),
            Window::Range { lo, hi } => {
                match lo {
                    Some(l) => write!(f, "[{l}")?,
                    None => write!(f, "(-inf")?,
                }
                match hi {
                    Some(h) => write!(f, ", {h}]"),
                    None => write!(f, ", inf)"),
                }
            }
        }
    }
}

/// One row `q` of a cohomology table: stored dimensions per twist, and the
/// window outside which the row is known to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub dims: BTreeMap<i64, Dim>,
    pub window: Window,
    /// False when nothing is known outside the stored twists.
    pub certified: bool,
}

impl Row {
    pub fn uncertified(dims: BTreeMap<i64, Dim>) -> Self {
        Row {
            dims,
            window: Window::ALL,
            certified: false,
        }
    }

    pub fn get(&self, t: i64) -> Option<Dim> {
        if self.certified && !self.window.contains(t) {
            return Some(Dim::ZERO);
        }
        self.dims.get(&t).copied()
    }
}

/// Result of scanning one row over a range of twists.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RowScan {
    /// Entries known to be positive.
    pub nonzero: Vec<(i64, Dim)>,
    /// Entries whose interval straddles zero, or twists with no stored value.
    pub uncertain: Vec<(i64, Option<Dim>)>,
    /// False when the range cannot be exhausted (unbounded window part or an
    /// uncertified row).
    pub complete: bool,
}

impl RowScan {
    pub fn vanishes(&self) -> bool {
        self.complete && self.nonzero.is_empty() && self.uncertain.is_empty()
    }
}

/// Dimensions `h^q(F(t))` for `q = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyTable {
    n: usize,
    rows: Vec<Row>,
}

impl CohomologyTable {
    pub fn new(n: usize, rows: Vec<Row>) -> Result<Self> {
        if rows.len() != n + 1 {
            return invalid(format!(
                "table on P^{n} needs {} rows, got {}",
                n + 1,
                rows.len()
            ));
        }
        Ok(CohomologyTable { n, rows })
    }

    /// An all-zero table, every row certified empty.
    pub fn zero(n: usize) -> Self {
        let row = Row {
            dims: BTreeMap::new(),
            window: Window::Empty,
            certified: true,
        };
        CohomologyTable {
            n,
            rows: vec![row; n + 1],
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn row(&self, q: usize) -> &Row {
        &self.rows[q]
    }

    pub fn row_mut(&mut self, q: usize) -> &mut Row {
        &mut self.rows[q]
    }

    /// `h^q(F(t))`, or `None` when the table does not know it.
    pub fn get(&self, q: usize, t: i64) -> Option<Dim> {
        self.rows.get(q).and_then(|r| r.get(t))
    }

    /// The same table with stored entries limited to twists `lo..=hi`.
    pub fn restricted(&self, lo: i64, hi: i64) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|r| Row {
                dims: r.dims.range(lo..=hi).map(|(&t, &d)| (t, d)).collect(),
                ..r.clone()
            })
            .collect();
        CohomologyTable { n: self.n, rows }
    }

    /// Records a value, keeping the window consistent.
    pub fn set(&mut self, q: usize, t: i64, d: Dim) {
        let row = &mut self.rows[q];
        if d.may_be_nonzero() && !row.window.contains(t) {
            row.window = row.window.hull(&Window::point(t));
        }
        row.dims.insert(t, d);
    }

    /// Scans row `q` over `[lo, hi]` (unbounded when `None`), restricted to
    /// the row's window.
    pub fn scan(&self, q: usize, lo: Option<i64>, hi: Option<i64>) -> RowScan {
        let row = &self.rows[q];
        let range = Window::Range { lo, hi };
        let effective = if row.certified {
            row.window.intersect(&range)
        } else {
            range
        };
        let mut out = RowScan {
            complete: true,
            ..Default::default()
        };
        let (a, b) = match effective {
            Window::Empty => return out,
            Window::Range {
                lo: Some(a),
                hi: Some(b),
            } => (a, b),
            Window::Range { lo, hi } => {
                out.complete = false;
                let a = lo.unwrap_or_else(|| row.dims.keys().next().copied().unwrap_or(0));
                let b = hi.unwrap_or_else(|| row.dims.keys().next_back().copied().unwrap_or(0));
                (a, b)
            }
        };
        for t in a..=b {
            match row.get(t) {
                Some(d) if d.is_zero() => {}
                Some(d) if d.is_nonzero() => out.nonzero.push((t, d)),
                other => out.uncertain.push((t, other)),
            }
        }
        out
    }

    /// JSON object `{"n": n, "rows": {"q": {"window": ..., "certified": ..., "dims": {"t": dim}}}}`.
    pub fn to_json(&self) -> Value {
        let mut rows = Map::new();
        for (q, row) in self.rows.iter().enumerate() {
            let dims: Map<String, Value> = row
                .dims
                .iter()
                .map(|(t, d)| (t.to_string(), d.to_json()))
                .collect();
            rows.insert(
                q.to_string(),
                json!({ "window": row.window.to_json(), "certified": row.certified, "dims": dims }),
            );
        }
        json!({ "n": self.n, "rows": rows })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let n =
            v.get("n").and_then(Value::as_u64).ok_or_else(|| {
                Error::InvalidInput("table needs a nonnegative integer `n`".into())
            })? as usize;
        let rows_v = v
            .get("rows")
            .and_then(Value::as_object)
            .ok_or_else(|| Error::InvalidInput("table needs a `rows` object".into()))?;
        let mut table = CohomologyTable {
            n,
            rows: vec![Row::uncertified(BTreeMap::new()); n + 1],
        };
        for (key, row_v) in rows_v {
            let q: usize = key
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad row index `{key}`")))?;
            if q > n {
                return invalid(format!("row {q} out of range for P^{n}"));
            }
            let mut dims = BTreeMap::new();
            if let Some(d) = row_v.get("dims").and_then(Value::as_object) {
                for (tk, dv) in d {
                    let t: i64 = tk
                        .parse()
                        .map_err(|_| Error::InvalidInput(format!("bad twist `{tk}`")))?;
                    dims.insert(t, Dim::from_json(dv)?);
                }
            }
            let certified = row_v
                .get("certified")
                .and_then(Value::as_bool)
                .unwrap_or(false);
            let window = match row_v.get("window") {
                Some(w) => Window::from_json(w)?,
                None => Window::ALL,
            };
            if certified {
                if let Some((t, _)) = dims
                    .iter()
                    .find(|(t, d)| d.may_be_nonzero() && !window.contains(**t))
                {
                    return invalid(format!(
                        "row {q}: nonzero entry at twist {t} outside its window {window}"
                    ));
                }
            }
            table.rows[q] = Row {
                dims,
                window,
                certified,
            };
        }
        Ok(table)
    }
}

impl fmt::Display for CohomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lo = self
            .rows
            .iter()
            .filter_map(|r| r.dims.keys().next())
            .min()
            .copied();
        let hi = self
            .rows
            .iter()
            .filter_map(|r| r.dims.keys().next_back())
            .max()
            .copied();
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return writeln!(f, "(empty table on P^{})", self.n);
        };
        write!(f, "{:>5} |", "t")?;
        for t in lo..=hi {
            write!(f, " {t:>6}")?;
        }
        writeln!(f)?;
        for (q, row) in self.rows.iter().enumerate().rev() {
            write!(f, "{:>5} |", format!("h^{q}"))?;
            for t in lo..=hi {
                match row.get(t) {
                    Some(d) => write!(f, " {:>6}", d.to_string())?,
                    None => write!(f, " {:>6}", "?")?,
                }
            }
            writeln!(
                f,
                "   window {}{}",
                row.window,
                if row.certified { "" } else { " (uncertified)" }
            )?;
        }
        Ok(())
    }
}

fn binom(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    u64::try_from(acc).expect("cohomology dimension overflows u64")
}

/// `h^q(P^n, Ω^p(k))` by Bott's formula.
///
/// Nonzero only for `q = 0, k > p`, for `q = p, k = 0` (value 1), and for
/// `q = n, k < p - n`.
pub fn bott_dim(n: usize, p: usize, k: i64, q: usize) -> u64 {
    assert!(p <= n && q <= n, "need 0 <= p, q <= n");
    let (n_, p_) = (n as i64, p as i64);
    let mut v = 0;
    if q == 0 && k > p_ {
        v += binom(k + n_ - p_, k) * binom(k - 1, p_);
    }
    if q == p && k == 0 {
        v += 1;
    }
    if q == n && k < p_ - n_ {
        v += binom(-k + p_, -k) * binom(-k - 1, n_ - p_);
    }
    v
}

/// A single summand: `O(a)` or `Ω^p(k)` with `0 < p < n`.
///
/// `Ω^0(k)` and `Ω^n(k)` are folded into line bundles on construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SheafAtom {
    Line(i64),
    Omega { p: usize, k: i64 },
}

impl SheafAtom {
    pub fn line(a: i64) -> Self {
        SheafAtom::Line(a)
    }

    /// `Ω^p(k)` on `P^n`, in canonical form.
    pub fn omega(n: usize, p: usize, k: i64) -> Result<Self> {
        match p {
            0 => Ok(SheafAtom::Line(k)),
            p if p == n => Ok(SheafAtom::Line(k - n as i64 - 1)),
            p if p < n => Ok(SheafAtom::Omega { p, k }),
            _ => invalid(format!("Ω^{p} does not exist on P^{n}")),
        }
    }

    pub fn rank(&self, n: usize) -> u64 {
        match *self {
            SheafAtom::Line(_) => 1,
            SheafAtom::Omega { p, .. } => binom(n as i64, p as i64),
        }
    }

    pub fn c1(&self, n: usize) -> i64 {
        match *self {
            SheafAtom::Line(a) => a,
            // c_1(Ω^p) = -C(n-1, p-1)(n+1)
            SheafAtom::Omega { p, k } => {
                let r = binom(n as i64, p as i64) as i64;
                -(binom(n as i64 - 1, p as i64 - 1) as i64) * (n as i64 + 1) + r * k
            }
        }
    }

    pub fn twisted(&self, t: i64) -> Self {
        match *self {
            SheafAtom::Line(a) => SheafAtom::Line(a + t),
            SheafAtom::Omega { p, k } => SheafAtom::Omega { p, k: k + t },
        }
    }

    /// `h^q` of the atom twisted by `t`.
    pub fn dim(&self, n: usize, q: usize, t: i64) -> u64 {
        match *self {
            SheafAtom::Line(a) => bott_dim(n, 0, a + t, q),
            SheafAtom::Omega { p, k } => bott_dim(n, p, k + t, q),
        }
    }

    /// Twists `t` at which `h^q` of the atom twisted by `t` can be nonzero.
    pub fn support(&self, n: usize, q: usize) -> Window {
        let (p, k) = match *self {
            SheafAtom::Line(a) => (0usize, a),
            SheafAtom::Omega { p, k } => (p, k),
        };
        let (n_, p_) = (n as i64, p as i64);
        let mut w = Window::Empty;
        if q == 0 {
            // k + t > p, and for p = 0 also k + t = 0
            w = w.hull(&Window::at_least(p_ - k + if p == 0 { 0 } else { 1 }));
        }
        if q == p && p != 0 && p != n {
            w = w.hull(&Window::point(-k));
        }
        if q == n {
            // k + t < p - n, and for p = n also k + t = 0 (not reachable for atoms)
            w = w.hull(&Window::at_most(p_ - n_ - k - 1));
        }
        w
    }
}

impl fmt::Display for SheafAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SheafAtom::Line(a) => write!(f, "O({a})"),
            SheafAtom::Omega { p, k } => write!(f, "Om({p},{k})"),
        }
    }
}

/// A formal direct sum of atoms with positive multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VirtualSheaf {
    n: usize,
    atoms: BTreeMap<SheafAtom, u64>,
}

impl VirtualSheaf {
    pub fn new(n: usize, atoms: impl IntoIterator<Item = (SheafAtom, u64)>) -> Result<Self> {
        if n == 0 {
            return invalid("ambient dimension must be positive");
        }
        let mut map = BTreeMap::new();
        for (atom, m) in atoms {
            if let SheafAtom::Omega { p, .. } = atom {
                if p == 0 || p >= n {
                    return invalid(format!("non-canonical atom {atom} on P^{n}"));
                }
            }
            if m > 0 {
                *map.entry(atom).or_insert(0) += m;
            }
        }
        if map.is_empty() {
            return invalid("virtual sheaf must have positive rank");
        }
        Ok(VirtualSheaf { n, atoms: map })
    }

    pub fn atom(n: usize, atom: SheafAtom) -> Result<Self> {
        Self::new(n, [(atom, 1)])
    }

    pub fn from_split(bundle: &SplitBundle) -> Self {
        Self::new(
            bundle.ambient_dim(),
            bundle.twists().iter().map(|&a| (SheafAtom::Line(a), 1)),
        )
        .expect("split bundles are nonempty")
    }

    /// `Ω^p(k)` on `P^n`.
    pub fn omega(n: usize, p: usize, k: i64) -> Result<Self> {
        Self::atom(n, SheafAtom::omega(n, p, k)?)
    }

    /// `T_{P^n} = Ω^{n-1}(n+1)`.
    pub fn tangent(n: usize) -> Self {
        Self::atom(n, ext_power_tangent(n, 1).expect("q = 1 is in range")).expect("valid atom")
    }

    pub fn cotangent(n: usize) -> Self {
        Self::omega(n, 1, 0).expect("valid atom")
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&SheafAtom, &u64)> {
        self.atoms.iter()
    }

    pub fn rank(&self) -> u64 {
        self.atoms.iter().map(|(a, m)| a.rank(self.n) * m).sum()
    }

    pub fn c1(&self) -> i64 {
        self.atoms
            .iter()
            .map(|(a, &m)| a.c1(self.n) * m as i64)
            .sum()
    }

    pub fn is_split(&self) -> bool {
        self.atoms.keys().all(|a| matches!(a, SheafAtom::Line(_)))
    }

    pub fn twist(&self, t: i64) -> Self {
        VirtualSheaf {
            n: self.n,
            atoms: self.atoms.iter().map(|(a, &m)| (a.twisted(t), m)).collect(),
        }
    }

    pub fn direct_sum(&self, other: &VirtualSheaf) -> Result<Self> {
        if self.n != other.n {
            return invalid("direct sum of sheaves on different projective spaces");
        }
        Self::new(
            self.n,
            self.atoms().chain(other.atoms()).map(|(a, &m)| (*a, m)),
        )
    }

    /// Tensor product; at least one factor must be split.
    pub fn tensor(&self, other: &VirtualSheaf) -> Result<Self> {
        if self.n != other.n {
            return invalid("tensor product of sheaves on different projective spaces");
        }
        let (general, split) = match (self.is_split(), other.is_split()) {
            (_, true) => (self, other),
            (true, false) => (other, self),
            (false, false) => {
                return Err(Error::Unsupported(
                    "tensor products of two cotangent powers are outside the calculus".into(),
                ))
            }
        };
        let mut atoms = Vec::new();
        for (a, &m) in general.atoms() {
            for (b, &l) in split.atoms() {
                let SheafAtom::Line(t) = *b else {
                    unreachable!()
                };
                atoms.push((a.twisted(t), m * l));
            }
        }
        Self::new(self.n, atoms)
    }

    /// Dual of a split sheaf.
    pub fn dual(&self) -> Result<Self> {
        if !self.is_split() {
            return Err(Error::Unsupported(format!(
                "dual of non-split sheaf {self} is outside the calculus"
            )));
        }
        Ok(VirtualSheaf {
            n: self.n,
            atoms: self
                .atoms
                .iter()
                .map(|(a, &m)| match *a {
                    SheafAtom::Line(t) => (SheafAtom::Line(-t), m),
                    SheafAtom::Omega { .. } => unreachable!(),
                })
                .collect(),
        })
    }

    /// `h^q(F(t))`.
    pub fn dim(&self, q: usize, t: i64) -> u64 {
        self.atoms
            .iter()
            .map(|(a, m)| a.dim(self.n, q, t) * m)
            .sum()
    }

    /// Twists where `h^q(F(t))` can be nonzero.
    pub fn support(&self, q: usize) -> Window {
        self.atoms
            .keys()
            .fold(Window::Empty, |w, a| w.hull(&a.support(self.n, q)))
    }
}

impl fmt::Display for VirtualSheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Larger twists first, matching SplitBundle's display.
        let mut items: Vec<_> = self.atoms.iter().collect();
        items.sort_by(|(a, _), (b, _)| match (a, b) {
            (SheafAtom::Line(x), SheafAtom::Line(y)) => y.cmp(x),
            _ => a.cmp(b),
        });
        for (i, (a, &m)) in items.into_iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "{a}")?;
            if m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

/// Exact cohomology table of `sheaf` on twists `[twist_lo, twist_hi]`,
/// extended to cover every bounded row window.
pub fn table(sheaf: &VirtualSheaf, twist_lo: i64, twist_hi: i64) -> Result<CohomologyTable> {
    if twist_lo > twist_hi {
        return invalid(format!("empty twist range {twist_lo}..{twist_hi}"));
    }
    let n = sheaf.ambient_dim();
    let (mut lo, mut hi) = (twist_lo, twist_hi);
    for q in 0..=n {
        if let Window::Range {
            lo: Some(a),
            hi: Some(b),
        } = sheaf.support(q)
        {
            lo = lo.min(a);
            hi = hi.max(b);
        }
    }
    let mut rows = Vec::with_capacity(n + 1);
    for q in 0..=n {
        let dims = (lo..=hi)
            .map(|t| (t, Dim::exact(sheaf.dim(q, t))))
            .collect();
        rows.push(Row {
            dims,
            window: sheaf.support(q),
            certified: true,
        });
    }
    CohomologyTable::new(n, rows)
}

/// `S^j` of a split bundle: all sums of `j` twists with repetition.
pub fn sym_power(bundle: &SplitBundle, j: usize) -> SplitBundle {
    let tw = bundle.twists();
    let mut out = Vec::new();
    fn rec(tw: &[i64], start: usize, left: usize, acc: i64, out: &mut Vec<i64>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..tw.len() {
            rec(tw, i, left - 1, acc + tw[i], out);
        }
    }
    rec(tw, 0, j, 0, &mut out);
    SplitBundle::new(bundle.ambient_dim(), out).expect("symmetric powers are nonempty")
}

/// `Λ^j` of a split bundle: all sums of `j` distinct summands.
pub fn ext_power_split(bundle: &SplitBundle, j: usize) -> Result<SplitBundle> {
    let tw = bundle.twists();
    if j > tw.len() {
        return invalid(format!("Λ^{j} of a rank {} bundle vanishes", tw.len()));
    }
    let mut out = Vec::new();
    fn rec(tw: &[i64], start: usize, left: usize, acc: i64, out: &mut Vec<i64>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for i in start..tw.len() {
            rec(tw, i + 1, left - 1, acc + tw[i], out);
        }
    }
    rec(tw, 0, j, 0, &mut out);
    SplitBundle::new(bundle.ambient_dim(), out)
}

/// `Λ^q T_{P^n} = Ω^{n-q}(n+1)`.
pub fn ext_power_tangent(n: usize, q: usize) -> Result<SheafAtom> {
    if q > n {
        return invalid(format!("Λ^{q} T vanishes on P^{n}"));
    }
    SheafAtom::omega(n, n - q, n as i64 + 1)
}

/// `atom ⊗ bundle`, distributing the twists.
pub fn tensor_with_split(n: usize, atom: SheafAtom, bundle: &SplitBundle) -> Result<VirtualSheaf> {
    VirtualSheaf::new(n, bundle.twists().iter().map(|&a| (atom.twisted(a), 1)))
}

pub fn dual_split(bundle: &SplitBundle) -> SplitBundle {
    SplitBundle::new(
        bundle.ambient_dim(),
        bundle.twists().iter().map(|a| -a).collect(),
    )
    .expect("nonempty")
}
