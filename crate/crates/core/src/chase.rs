//! Dimension chases through long exact cohomology sequences.
//!
//! Each short exact sequence `0 -> A -> B -> C -> 0` on `P^n`, twisted by
//! `t`, gives the exact sequence
//! `0 -> H^0 A -> H^0 B -> H^0 C -> H^1 A -> ... -> H^n C -> 0`.
//! Writing each group as `rho_{j-1} + rho_j`, with `rho_j >= 0` the rank of
//! the outgoing map, the feasible values of every group form an interval
//! that a forward and a backward pass compute exactly. Unknown sheaves are
//! tightened by iterating over all triples until nothing changes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::chow::{DistributionParams, SplitBundle};
use crate::cohomology::{
    ext_power_tangent, sym_power, tensor_with_split, CohomologyTable, Dim, Row, SheafAtom,
    VirtualSheaf, Window,
};
use crate::criteria::{acm_check, beilinson_rank_bound, Decision, Verdict, Witness};
use crate::error::{invalid, Error, Result};

/// One term of a short exact sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Zero,
    Known(VirtualSheaf),
    /// A fixed table; `h^q` of the term at twist `t` is `h^q(table)` at `t + shift`.
    Table {
        table: Arc<CohomologyTable>,
        shift: i64,
    },
    /// An unknown sheaf, solved for; the term at twist `t` is the unknown at `t + shift`.
    Unknown {
        name: String,
        shift: i64,
    },
}

impl Term {
    pub fn unknown(name: &str) -> Self {
        Term::Unknown {
            name: name.to_string(),
            shift: 0,
        }
    }

    pub fn unknown_shifted(name: &str, shift: i64) -> Self {
        Term::Unknown {
            name: name.to_string(),
            shift,
        }
    }

    pub fn table(table: CohomologyTable, shift: i64) -> Self {
        Term::Table {
            table: Arc::new(table),
            shift,
        }
    }

    fn unknown_name(&self) -> Option<(&str, i64)> {
        match self {
            Term::Unknown { name, shift } => Some((name, *shift)),
            _ => None,
        }
    }

    fn rank(&self) -> Option<u64> {
        match self {
            Term::Zero => Some(0),
            Term::Known(s) => Some(s.rank()),
            _ => None,
        }
    }
}

fn fmt_shift(f: &mut fmt::Formatter<'_>, s: i64) -> fmt::Result {
    if s != 0 {
        write!(f, "({s})")?;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Zero => write!(f, "0"),
            Term::Known(s) => write!(f, "{s}"),
            Term::Table { shift, .. } => {
                write!(f, "<table>")?;
                fmt_shift(f, *shift)
            }
            Term::Unknown { name, shift } => {
                write!(f, "{name}")?;
                fmt_shift(f, *shift)
            }
        }
    }
}

/// `0 -> a -> b -> c -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactTriple {
    pub a: Term,
    pub b: Term,
    pub c: Term,
    pub label: String,
}

impl ExactTriple {
    pub fn new(a: Term, b: Term, c: Term, label: impl Into<String>) -> Self {
        ExactTriple {
            a,
            b,
            c,
            label: label.into(),
        }
    }

    pub fn terms(&self) -> [&Term; 3] {
        [&self.a, &self.b, &self.c]
    }

    /// `rank(b) - rank(a) - rank(c)` when all three ranks are known.
    pub fn rank_defect(&self) -> Option<i64> {
        let [a, b, c] = self.terms().map(|t| t.rank());
        Some(b? as i64 - a? as i64 - c? as i64)
    }
}

impl fmt::Display for ExactTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: 0 -> {} -> {} -> {} -> 0",
            self.label, self.a, self.b, self.c
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    A,
    B,
    C,
}

impl Role {
    fn from_index(i: usize) -> Self {
        [Role::A, Role::B, Role::C][i]
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Integer interval `[lo, hi]`, `hi = None` meaning unbounded, used inside
/// the solver where differences can go negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Iv {
    lo: i128,
    hi: Option<i128>,
}

impl Iv {
    const ZERO: Iv = Iv { lo: 0, hi: Some(0) };

    fn from_dim(d: Dim) -> Self {
        Iv {
            lo: d.lo() as i128,
            hi: d.hi().map(|h| h as i128),
        }
    }

    fn to_dim(self) -> Dim {
        Dim::interval(self.lo as u64, self.hi.map(|h| h as u64))
    }

    fn is_empty(&self) -> bool {
        self.hi.is_some_and(|h| h < self.lo)
    }

    /// `{v - r : v in self, r in other} ∩ [0, inf)`.
    fn minus_nonneg(self, other: Iv) -> Iv {
        let lo = match other.hi {
            Some(h) => (self.lo - h).max(0),
            None => 0,
        };
        Iv {
            lo,
            hi: self.hi.map(|h| h - other.lo),
        }
    }

    fn plus(self, other: Iv) -> Iv {
        Iv {
            lo: self.lo + other.lo,
            hi: self.hi.zip(other.hi).map(|(a, b)| a + b),
        }
    }

    fn meet(self, other: Iv) -> Iv {
        let hi = match (self.hi, other.hi) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, None) => a,
            (None, b) => b,
        };
        Iv {
            lo: self.lo.max(other.lo),
            hi,
        }
    }
}

/// Tightest bounds on every group of an exact sequence
/// `0 -> V_0 -> V_1 -> ... -> V_{m-1} -> 0` given prior bounds, or `None`
/// when the priors are inconsistent.
pub fn les_bounds(seq: &[Dim]) -> Option<Vec<Dim>> {
    let m = seq.len();
    let iv: Vec<Iv> = seq.iter().map(|&d| Iv::from_dim(d)).collect();
    // fwd[j]: feasible rank of the map out of V_j, from the prefix
    let mut fwd = Vec::with_capacity(m);
    let mut prev = Iv::ZERO;
    for v in &iv {
        let r = v.minus_nonneg(prev);
        if r.is_empty() {
            return None;
        }
        fwd.push(r);
        prev = r;
    }
    // bwd[j]: feasible rank of the map into V_j, from the suffix
    let mut bwd = vec![Iv::ZERO; m + 1];
    for j in (0..m).rev() {
        let r = iv[j].minus_nonneg(bwd[j + 1]);
        if r.is_empty() {
            return None;
        }
        bwd[j] = r;
    }
    let mut out = Vec::with_capacity(m);
    for j in 0..m {
        let into = if j == 0 { Iv::ZERO } else { fwd[j - 1] };
        let out_of = if j + 1 == m { Iv::ZERO } else { bwd[j + 1] };
        let v = into.plus(out_of).meet(iv[j]);
        if v.is_empty() {
            return None;
        }
        out.push(v.to_dim());
    }
    Some(out)
}

/// Why an unknown's entry has its value: the last solve that tightened it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub triple: usize,
    pub label: String,
    /// Twist of the triple at which the sequence was solved.
    pub twist: i64,
    pub role: Role,
    pub q: usize,
    /// Position of the entry in `sequence`: `3q + role`.
    pub position: usize,
    /// The `3(n+1)` prior bounds fed to the solver.
    pub sequence: Vec<Dim>,
    pub value: Dim,
}

impl Provenance {
    /// Re-runs the solver on the recorded sequence.
    pub fn replay(&self) -> Result<Dim> {
        les_bounds(&self.sequence)
            .map(|v| v[self.position])
            .ok_or_else(|| {
                Error::Inconsistent(format!(
                    "recorded sequence for {} is infeasible",
                    self.label
                ))
            })
    }

    pub fn describe(&self, triple: &ExactTriple) -> String {
        let name = |p: usize| -> String {
            let term = triple.terms()[p % 3];
            format!("h^{}({}({}))", p / 3, term, self.twist)
        };
        let mut s = format!(
            "{} = {} from `{}` at twist {}",
            name(self.position),
            self.value,
            self.label,
            self.twist
        );
        let mut neigh = Vec::new();
        if self.position > 0 {
            neigh.push(format!(
                "{} = {}",
                name(self.position - 1),
                self.sequence[self.position - 1]
            ));
        }
        neigh.push(format!("prior {}", self.sequence[self.position]));
        if self.position + 1 < self.sequence.len() {
            neigh.push(format!(
                "{} = {}",
                name(self.position + 1),
                self.sequence[self.position + 1]
            ));
        }
        s.push_str(&format!(" ({})", neigh.join(", ")));
        s
    }

    pub fn to_json(&self) -> Value {
        json!({
            "triple": self.triple,
            "label": self.label,
            "twist": self.twist,
            "role": self.role.to_string(),
            "q": self.q,
            "position": self.position,
            "sequence": self.sequence.iter().map(|d| d.to_json()).collect::<Vec<_>>(),
            "value": self.value.to_json(),
        })
    }
}

/// Request for `h^q(unknown(t))`, `t` in `lo..=hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub unknown: String,
    pub q: usize,
    pub lo: i64,
    pub hi: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryAnswer {
    pub query: Query,
    pub values: Vec<(i64, Dim)>,
    /// Some value has no upper bound.
    pub unbounded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChaseResult {
    pub n: usize,
    pub triples: Vec<ExactTriple>,
    pub tables: BTreeMap<String, CohomologyTable>,
    pub provenance: BTreeMap<String, BTreeMap<(usize, i64), Provenance>>,
    pub answers: Vec<QueryAnswer>,
    /// Twists (in the unknowns' own coordinates) solved exactly.
    pub grid: (i64, i64),
    /// Number of (triple, twist) pairs with all groups exact whose Euler
    /// characteristics were checked to cancel.
    pub euler_checks: usize,
    /// Unknowns that no triple constrains.
    pub unconstrained: BTreeSet<String>,
}

impl ChaseResult {
    pub fn table(&self, name: &str) -> Result<&CohomologyTable> {
        self.tables
            .get(name)
            .ok_or_else(|| invalid::<()>(format!("no unknown named `{name}`")).unwrap_err())
    }

    pub fn provenance_of(&self, name: &str, q: usize, t: i64) -> Option<&Provenance> {
        self.provenance.get(name).and_then(|m| m.get(&(q, t)))
    }

    /// Text trace of every stored entry that is nonzero or not exact, and of
    /// how each exact nonzero value was forced.
    pub fn explain(&self) -> String {
        let mut s = String::new();
        for t in &self.triples {
            s.push_str(&format!("{t}\n"));
        }
        for (name, table) in &self.tables {
            s.push_str(&format!("\n{name}:\n{table}"));
            let Some(prov) = self.provenance.get(name) else {
                continue;
            };
            for ((q, t), p) in prov {
                let v = table.get(*q, *t);
                // zero entries are summarized by the windows
                if v.is_some_and(|d| !d.is_zero()) {
                    s.push_str(&format!("  {}\n", p.describe(&self.triples[p.triple])));
                }
            }
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let tables: serde_json::Map<String, Value> = self
            .tables
            .iter()
            .map(|(k, v)| (k.clone(), v.to_json()))
            .collect();
        let prov: serde_json::Map<String, Value> = self
            .provenance
            .iter()
            .map(|(k, m)| {
                (
                    k.clone(),
                    Value::Array(m.values().map(|p| p.to_json()).collect()),
                )
            })
            .collect();
        let answers: Vec<Value> = self
            .answers
            .iter()
            .map(|a| {
                json!({
                    "unknown": a.query.unknown,
                    "q": a.query.q,
                    "values": a.values.iter().map(|(t, d)| json!([t, d.to_json()])).collect::<Vec<_>>(),
                    "unbounded": a.unbounded,
                })
            })
            .collect();
        json!({
            "n": self.n,
            "triples": self.triples.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "grid": [self.grid.0, self.grid.1],
            "tables": tables,
            "provenance": prov,
            "answers": answers,
            "euler_checks": self.euler_checks,
        })
    }
}

struct UnknownState {
    crude: Vec<Window>,
    values: BTreeMap<(usize, i64), Dim>,
    prov: BTreeMap<(usize, i64), Provenance>,
}

struct Solver<'a> {
    n: usize,
    triples: &'a [ExactTriple],
    unknowns: BTreeMap<String, UnknownState>,
    grid: (i64, i64),
}

impl Solver<'_> {
    fn group(&self, term: &Term, q: usize, t: i64) -> Dim {
        match term {
            Term::Zero => Dim::ZERO,
            Term::Known(s) => Dim::exact(s.dim(q, t)),
            Term::Table { table, shift } => table.get(q, t + shift).unwrap_or(Dim::UNBOUNDED),
            Term::Unknown { name, shift } => {
                let u = &self.unknowns[name];
                let x = t + shift;
                if !u.crude[q].contains(x) {
                    Dim::ZERO
                } else {
                    u.values.get(&(q, x)).copied().unwrap_or(Dim::UNBOUNDED)
                }
            }
        }
    }

    fn support(&self, term: &Term, q: usize) -> Window {
        match term {
            Term::Zero => Window::Empty,
            Term::Known(s) => s.support(q),
            Term::Table { table, shift } => {
                let row = table.row(q);
                let w = if row.certified {
                    row.window
                } else {
                    Window::ALL
                };
                w.shifted(-shift)
            }
            Term::Unknown { name, shift } => self.unknowns[name].crude[q].shifted(-shift),
        }
    }

    /// Shrinks crude windows: a group can be nonzero only where one of its
    /// two neighbours in the sequence can be.
    fn propagate_windows(&mut self) {
        let n = self.n;
        let cap = 8 * (self.triples.len() + 1) * (n + 1);
        for _ in 0..cap {
            let mut changed = false;
            for tr in self.triples {
                let terms = tr.terms();
                for (role, term) in terms.iter().enumerate() {
                    let Some((name, shift)) = term.unknown_name() else {
                        continue;
                    };
                    for q in 0..=n {
                        let mut w = Window::Empty;
                        let mut add = |t: &Term, q: usize| w = w.hull(&self.support(t, q));
                        match role {
                            0 => {
                                if q > 0 {
                                    add(terms[2], q - 1);
                                }
                                add(terms[1], q);
                            }
                            1 => {
                                add(terms[0], q);
                                add(terms[2], q);
                            }
                            _ => {
                                add(terms[1], q);
                                if q < n {
                                    add(terms[0], q + 1);
                                }
                            }
                        }
                        let u = self.unknowns.get_mut(name).expect("registered");
                        let new = u.crude[q].intersect(&w.shifted(shift));
                        if new != u.crude[q] {
                            u.crude[q] = new;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
    }

    fn sequence(&self, tr: &ExactTriple, t: i64) -> Vec<Dim> {
        let mut seq = Vec::with_capacity(3 * (self.n + 1));
        for q in 0..=self.n {
            for term in tr.terms() {
                seq.push(self.group(term, q, t));
            }
        }
        seq
    }

    fn twists_for(&self, tr: &ExactTriple) -> Option<(i64, i64)> {
        let shifts: Vec<i64> = tr
            .terms()
            .iter()
            .filter_map(|t| t.unknown_name().map(|(_, s)| s))
            .collect();
        let lo = shifts.iter().map(|s| self.grid.0 - s).min()?;
        let hi = shifts.iter().map(|s| self.grid.1 - s).max()?;
        Some((lo, hi))
    }

    fn solve(&mut self) -> Result<()> {
        let cap = 4 * (self.triples.len() + 2) * (self.n + 2);
        for _ in 0..cap {
            let mut changed = false;
            for (idx, tr) in self.triples.iter().enumerate() {
                let Some((lo, hi)) = self.twists_for(tr) else {
                    continue;
                };
                for t in lo..=hi {
                    let seq = self.sequence(tr, t);
                    let out = les_bounds(&seq).ok_or_else(|| {
                        Error::Inconsistent(format!(
                            "`{}` has no consistent dimensions at twist {t}",
                            tr.label
                        ))
                    })?;
                    for (role, term) in tr.terms().iter().enumerate() {
                        let Some((name, shift)) = term.unknown_name() else {
                            continue;
                        };
                        let x = t + shift;
                        if x < self.grid.0 || x > self.grid.1 {
                            continue;
                        }
                        for q in 0..=self.n {
                            let pos = 3 * q + role;
                            let new = out[pos];
                            if new == seq[pos] {
                                continue;
                            }
                            let u = self.unknowns.get_mut(name).expect("registered");
                            if !u.crude[q].contains(x) {
                                continue;
                            }
                            u.values.insert((q, x), new);
                            u.prov.insert(
                                (q, x),
                                Provenance {
                                    triple: idx,
                                    label: tr.label.clone(),
                                    twist: t,
                                    role: Role::from_index(role),
                                    q,
                                    position: pos,
                                    sequence: seq.clone(),
                                    value: new,
                                },
                            );
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return Ok(());
            }
        }
        Ok(())
    }

    fn euler_checks(&self) -> Result<usize> {
        let mut count = 0;
        for tr in self.triples {
            let Some((lo, hi)) = self.twists_for(tr) else {
                continue;
            };
            for t in lo..=hi {
                let seq = self.sequence(tr, t);
                if seq.iter().all(|d| d.is_exact()) {
                    let sum: i128 = seq
                        .iter()
                        .enumerate()
                        .map(|(j, d)| {
                            let v = d.lo() as i128;
                            if j % 2 == 0 {
                                v
                            } else {
                                -v
                            }
                        })
                        .sum();
                    if sum != 0 {
                        return Err(Error::Inconsistent(format!(
                            "Euler characteristics of `{}` do not cancel at twist {t}",
                            tr.label
                        )));
                    }
                    count += 1;
                }
            }
        }
        Ok(count)
    }
}

fn check_acyclic(triples: &[ExactTriple]) -> Result<()> {
    let mut edges: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for tr in triples {
        if let Some((out, _)) = tr.c.unknown_name() {
            for t in [&tr.a, &tr.b] {
                if let Some((inp, _)) = t.unknown_name() {
                    edges.entry(inp).or_default().insert(out);
                }
            }
        }
    }
    // depth-first search with colours: 1 = on stack, 2 = done
    fn visit<'a>(
        v: &'a str,
        edges: &BTreeMap<&'a str, BTreeSet<&'a str>>,
        colour: &mut BTreeMap<&'a str, u8>,
    ) -> Result<()> {
        match colour.get(v) {
            Some(1) => return Err(Error::Cycle(v.to_string())),
            Some(2) => return Ok(()),
            _ => {}
        }
        colour.insert(v, 1);
        if let Some(next) = edges.get(v) {
            for w in next {
                visit(w, edges, colour)?;
            }
        }
        colour.insert(v, 2);
        Ok(())
    }
    let mut colour = BTreeMap::new();
    for v in edges.keys() {
        visit(v, &edges, &mut colour)?;
    }
    Ok(())
}

/// Solves for every unknown named in `triples` or `queries`.
pub fn chase(n: usize, triples: &[ExactTriple], queries: &[Query]) -> Result<ChaseResult> {
    if n == 0 {
        return invalid("ambient dimension must be positive");
    }
    for tr in triples {
        for t in tr.terms() {
            let dim = match t {
                Term::Known(s) => s.ambient_dim(),
                Term::Table { table, .. } => table.ambient_dim(),
                _ => n,
            };
            if dim != n {
                return invalid(format!("`{}` mixes P^{dim} and P^{n}", tr.label));
            }
        }
    }
    check_acyclic(triples)?;
    for q in queries {
        if q.q > n || q.lo > q.hi {
            return invalid(format!(
                "bad query h^{}({}) on {}..{}",
                q.q, q.unknown, q.lo, q.hi
            ));
        }
    }

    let mut names: BTreeSet<String> = BTreeSet::new();
    for tr in triples {
        for t in tr.terms() {
            if let Some((name, _)) = t.unknown_name() {
                names.insert(name.to_string());
            }
        }
    }
    let constrained = names.clone();
    names.extend(queries.iter().map(|q| q.unknown.clone()));

    let mut solver = Solver {
        n,
        triples,
        unknowns: names
            .iter()
            .map(|k| {
                let st = UnknownState {
                    crude: vec![Window::ALL; n + 1],
                    values: BTreeMap::new(),
                    prov: BTreeMap::new(),
                };
                (k.clone(), st)
            })
            .collect(),
        grid: (0, 0),
    };
    solver.propagate_windows();

    // grid: every finite window endpoint, in each unknown's coordinates
    let mut ends: Vec<i64> = Vec::new();
    let mut push = |w: Window, shift: i64| {
        if let Some((lo, hi)) = w.bounds() {
            ends.extend(lo.map(|x| x + shift));
            ends.extend(hi.map(|x| x + shift));
        }
    };
    for tr in triples {
        let shifts: Vec<i64> = tr
            .terms()
            .iter()
            .filter_map(|t| t.unknown_name().map(|(_, s)| s))
            .collect();
        for term in tr.terms() {
            for q in 0..=n {
                let w = solver.support(term, q);
                for &s in &shifts {
                    push(w, s);
                }
            }
        }
    }
    for q in queries {
        ends.push(q.lo);
        ends.push(q.hi);
    }
    let pad = n as i64 + 2;
    solver.grid = match (ends.iter().min(), ends.iter().max()) {
        (Some(&lo), Some(&hi)) => (lo - pad, hi + pad),
        _ => (-pad, pad),
    };
    solver.solve()?;
    let euler_checks = solver.euler_checks()?;

    let (g_lo, g_hi) = solver.grid;
    let mut tables = BTreeMap::new();
    let mut provenance = BTreeMap::new();
    let mut unconstrained = BTreeSet::new();
    for (name, st) in solver.unknowns {
        let mut rows = Vec::with_capacity(n + 1);
        let known = constrained.contains(&name);
        if !known {
            unconstrained.insert(name.clone());
        }
        for q in 0..=n {
            let mut dims = BTreeMap::new();
            let mut window = Window::Empty;
            for t in g_lo..=g_hi {
                let d = if !st.crude[q].contains(t) {
                    Dim::ZERO
                } else {
                    st.values.get(&(q, t)).copied().unwrap_or(Dim::UNBOUNDED)
                };
                if d.may_be_nonzero() {
                    window = window.hull(&Window::point(t));
                }
                dims.insert(t, d);
            }
            let below = st.crude[q].intersect(&Window::at_most(g_lo - 1));
            let above = st.crude[q].intersect(&Window::at_least(g_hi + 1));
            window = window.hull(&below).hull(&above);
            rows.push(if known {
                Row {
                    dims,
                    window,
                    certified: true,
                }
            } else {
                Row::uncertified(dims)
            });
        }
        tables.insert(name.clone(), CohomologyTable::new(n, rows)?);
        provenance.insert(name, st.prov);
    }

    let answers = queries
        .iter()
        .map(|q| {
            let table = &tables[&q.unknown];
            let values: Vec<(i64, Dim)> = (q.lo..=q.hi)
                .map(|t| (t, table.get(q.q, t).unwrap_or(Dim::UNBOUNDED)))
                .collect();
            let unbounded = values.iter().any(|(_, d)| d.hi().is_none());
            QueryAnswer {
                query: q.clone(),
                values,
                unbounded,
            }
        })
        .collect();

    Ok(ChaseResult {
        n,
        triples: triples.to_vec(),
        tables,
        provenance,
        answers,
        grid: solver.grid,
        euler_checks,
        unconstrained,
    })
}

pub const IDEAL: &str = "I_Z";

fn kernel_name(j: usize) -> String {
    format!("K{j}")
}

/// Splits the resolution `0 -> T_m -> ... -> T_0 -> I_Z -> 0` into `m`
/// short exact sequences through the kernels `K_j = ker(T_j -> K_{j-1})`.
fn break_resolution(terms: Vec<VirtualSheaf>, prefix: &str) -> Vec<ExactTriple> {
    let m = terms.len() - 1;
    let t = |j: usize| Term::Known(terms[j].clone());
    if m == 1 {
        return vec![ExactTriple::new(
            t(1),
            t(0),
            Term::unknown(IDEAL),
            format!("{prefix}: T1 -> T0 -> I_Z"),
        )];
    }
    let mut out = vec![ExactTriple::new(
        t(m),
        t(m - 1),
        Term::unknown(&kernel_name(m - 2)),
        format!("{prefix}: T{m} -> T{} -> K{}", m - 1, m - 2),
    )];
    for j in (1..=m - 2).rev() {
        out.push(ExactTriple::new(
            Term::unknown(&kernel_name(j)),
            t(j),
            Term::unknown(&kernel_name(j - 1)),
            format!("{prefix}: K{j} -> T{j} -> K{}", j - 1),
        ));
    }
    out.push(ExactTriple::new(
        Term::unknown(&kernel_name(0)),
        t(0),
        Term::unknown(IDEAL),
        format!("{prefix}: K0 -> T0 -> I_Z"),
    ));
    out
}

/// Eagon-Northcott resolution of the singular scheme of a distribution with
/// split tangent sheaf `F` of rank `r`:
/// `T_j = Ω^{r+j} ⊗ S_j(F) ⊗ O(c_1(F))` for `j = 0..=n-r`, resolving `I_Z`.
pub fn en_complex_tangent(f: &SplitBundle, n: usize) -> Result<Vec<ExactTriple>> {
    if f.ambient_dim() != n {
        return invalid("tangent sheaf lives on a different projective space");
    }
    let r = f.rank();
    if r == 0 || r >= n {
        return invalid(format!(
            "rank {r} tangent sheaf needs codimension n - r >= 1 on P^{n}"
        ));
    }
    let c = f.c1();
    let terms = (0..=n - r)
        .map(|j| tensor_with_split(n, SheafAtom::omega(n, r + j, c)?, &sym_power(f, j)))
        .collect::<Result<Vec<_>>>()?;
    Ok(break_resolution(terms, "EN(F)"))
}

/// Eagon-Northcott resolution from a split Pfaff bundle `E` of rank `n - r`:
/// `P_j = Λ^{n-r+j} T ⊗ S_j(E) ⊗ O(c_1(E))` for `j = 0..=r`.
pub fn en_complex_pfaff(e: &SplitBundle, r: usize, n: usize) -> Result<Vec<ExactTriple>> {
    if !(1..=3).contains(&r) {
        return Err(Error::Unsupported(format!(
            "Pfaff chases are implemented for r in 1..=3, got r = {r}"
        )));
    }
    if e.ambient_dim() != n {
        return invalid("Pfaff bundle lives on a different projective space");
    }
    if r >= n || e.rank() != n - r {
        return invalid(format!(
            "Pfaff bundle of rank {} does not match n - r = {}",
            e.rank(),
            n as i64 - r as i64
        ));
    }
    let c = e.c1();
    let er = n - r;
    let terms = (0..=r)
        .map(|j| {
            let atom = ext_power_tangent(n, er + j)?.twisted(c);
            tensor_with_split(n, atom, &sym_power(e, j))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(break_resolution(terms, "EN(E)"))
}

/// Rows `0..=n` of `I_Z` from a resolution, solved on a grid covering
/// `lo..=hi`.
pub fn chase_ideal(triples: &[ExactTriple], n: usize, lo: i64, hi: i64) -> Result<ChaseResult> {
    let queries: Vec<Query> = (0..=n)
        .map(|q| Query {
            unknown: IDEAL.into(),
            q,
            lo,
            hi,
        })
        .collect();
    chase(n, triples, &queries)
}

/// Chang's Ω-resolution
/// `0 -> ⊕ O(-a_i) -> ⊕ Ω^{p_j}(-k_j)^{l_j} ⊕ ⊕ O(-c_s) -> I_Y -> 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionData {
    pub n: usize,
    pub left: Vec<i64>,
    /// `(p, k, l)` for `Ω^p(-k)^{⊕ l}`.
    pub omegas: Vec<(usize, i64, u64)>,
    pub lines: Vec<i64>,
}

impl ResolutionData {
    fn sheaves(&self) -> Result<(VirtualSheaf, VirtualSheaf)> {
        let n = self.n;
        let a = VirtualSheaf::new(n, self.left.iter().map(|&a| (SheafAtom::Line(-a), 1)))?;
        let mut right = Vec::new();
        for &(p, k, l) in &self.omegas {
            right.push((SheafAtom::omega(n, p, -k)?, l));
        }
        right.extend(self.lines.iter().map(|&c| (SheafAtom::Line(-c), 1)));
        let b = VirtualSheaf::new(n, right)?;
        if b.rank() != a.rank() + 1 {
            return invalid(format!(
                "ranks {} -> {} do not resolve an ideal sheaf",
                a.rank(),
                b.rank()
            ));
        }
        Ok((a, b))
    }
}

/// Cohomology of `I_Y` from its Ω-resolution.
pub fn omega_resolution_cohomology(res: &ResolutionData) -> Result<CohomologyTable> {
    let (a, b) = res.sheaves()?;
    let tr = ExactTriple::new(
        Term::Known(a),
        Term::Known(b),
        Term::unknown(IDEAL),
        "Ω-resolution",
    );
    let out = chase_ideal(&[tr], res.n, -2, 2)?;
    Ok(out.tables[IDEAL].clone())
}

/// The tangent sheaf of a codimension-one distribution, as far as it is known.
#[derive(Clone, Debug)]
pub enum TangentData {
    Split(SplitBundle),
    Table(Arc<CohomologyTable>),
    /// Nothing known; solved for from the ideal-sheaf table.
    Unknown,
}

#[derive(Clone, Debug)]
pub struct LemmaItem {
    pub item: &'static str,
    pub statement: String,
    /// `None` when the item's hypothesis (ACM singular scheme) is not met.
    pub verdict: Option<Verdict>,
}

#[derive(Clone, Debug)]
pub struct LemmaReport {
    pub n: usize,
    pub d: i64,
    pub tangent_table: CohomologyTable,
    pub ideal_table: CohomologyTable,
    pub ideal_acm: Verdict,
    pub items: Vec<LemmaItem>,
    pub chase: ChaseResult,
}

impl LemmaReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "d": self.d,
            "ideal_acm": self.ideal_acm.to_json(),
            "items": self.items.iter().map(|i| json!({
                "item": i.item,
                "statement": i.statement,
                "verdict": i.verdict.as_ref().map(|v| v.to_json()),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Vanishing of `h^q` over twists in `[lo, hi]` (open ends unbounded).
fn vanishing(
    table: &CohomologyTable,
    q: usize,
    lo: Option<i64>,
    hi: Option<i64>,
    except: Option<i64>,
) -> Verdict {
    let scan = table.scan(q, lo, hi);
    let nonzero: Vec<Witness> = scan
        .nonzero
        .iter()
        .filter(|(t, _)| Some(*t) != except)
        .map(|&(t, d)| Witness::new(q, t, Some(d)))
        .collect();
    let uncertain: Vec<Witness> = scan
        .uncertain
        .iter()
        .filter(|(t, _)| Some(*t) != except)
        .map(|&(t, d)| Witness::new(q, t, d))
        .collect();
    let range = format!(
        "h^{q} over {}..{}",
        lo.map_or("-inf".into(), |x| x.to_string()),
        hi.map_or("inf".into(), |x| x.to_string())
    );
    let (decision, witnesses, certificate) = if !nonzero.is_empty() {
        (Decision::Fails, nonzero, None)
    } else if !uncertain.is_empty() || !scan.complete {
        (
            Decision::Undetermined,
            uncertain,
            Some(format!("{range} not exhausted")),
        )
    } else {
        (
            Decision::Holds,
            Vec::new(),
            Some(format!("{range} vanishes; window {}", table.row(q).window)),
        )
    };
    Verdict {
        decision,
        witnesses,
        certificate,
        clause: None,
    }
}

/// Items (i)-(iv) for a codimension-one distribution of degree `d` on
/// `P^n`, from `0 -> F -> T -> I_Z(d+2) -> 0`:
/// (i) `h^0(F(p)) = 0` for `p <= -2`; (ii) `h^1(F(p)) = 0` for `p <= -d-3`;
/// and when `Z` is ACM, (iii) `h^q(F(p)) = 0` for `2 <= q <= n-2` (n >= 4)
/// and (iv) `h^{n-1}(F(p)) = 0` for `p != -n-1`, `h^{n-1}(F(-n-1)) <= 1`.
pub fn distribution_cohomology_bounds(
    tangent: &TangentData,
    ideal: Option<&CohomologyTable>,
    d: i64,
    n: usize,
) -> Result<LemmaReport> {
    if n < 3 {
        return invalid("codimension-one distributions are treated for n >= 3");
    }
    if d < 0 {
        return invalid(format!("degree must be nonnegative, got {d}"));
    }
    if let TangentData::Split(f) = tangent {
        let p = DistributionParams::from_split_tangent(f)?;
        if p.r != n - 1 || p.n != n {
            return invalid("tangent sheaf must have rank n - 1");
        }
        if p.d != d {
            return invalid(format!("split tangent sheaf has degree {}, not {d}", p.d));
        }
    }
    let f_term = match tangent {
        TangentData::Split(f) => Term::Known(VirtualSheaf::from_split(f)),
        TangentData::Table(t) => Term::Table {
            table: t.clone(),
            shift: 0,
        },
        TangentData::Unknown => Term::unknown("F"),
    };
    let i_term = match ideal {
        Some(t) => Term::Table {
            table: Arc::new(t.clone()),
            shift: d + 2,
        },
        None => Term::unknown_shifted(IDEAL, d + 2),
    };
    let tr = ExactTriple::new(
        f_term,
        Term::Known(VirtualSheaf::tangent(n)),
        i_term,
        "F -> T -> I_Z(d+2)",
    );
    let mut queries = vec![];
    if matches!(tangent, TangentData::Unknown) {
        queries.extend((0..=n).map(|q| Query {
            unknown: "F".into(),
            q,
            lo: -(n as i64) - 3,
            hi: 2,
        }));
    }
    if ideal.is_none() {
        queries.extend((0..=n).map(|q| Query {
            unknown: IDEAL.into(),
            q,
            lo: -2,
            hi: d + 3,
        }));
    }
    let result = chase(n, std::slice::from_ref(&tr), &queries)?;
    let tangent_table = match tangent {
        TangentData::Split(f) => {
            crate::cohomology::table(&VirtualSheaf::from_split(f), result.grid.0, result.grid.1)?
        }
        TangentData::Table(t) => (**t).clone(),
        TangentData::Unknown => result.tables["F"].clone(),
    };
    let ideal_table = match ideal {
        Some(t) => t.clone(),
        None => result.tables[IDEAL].clone(),
    };
    let ideal_acm = acm_check(&ideal_table, n - 2)?;
    let acm = ideal_acm.holds();
    let ni = n as i64;
    let mut items = vec![
        LemmaItem {
            item: "(i)",
            statement: "h^0(F(p)) = 0 for p <= -2".into(),
            verdict: Some(vanishing(&tangent_table, 0, None, Some(-2), None)),
        },
        LemmaItem {
            item: "(ii)",
            statement: format!("h^1(F(p)) = 0 for p <= {}", -d - 3),
            verdict: Some(vanishing(&tangent_table, 1, None, Some(-d - 3), None)),
        },
    ];
    let iii = if acm && n >= 4 {
        let mut v = Verdict {
            decision: Decision::Holds,
            witnesses: vec![],
            certificate: None,
            clause: None,
        };
        let mut certs = Vec::new();
        for q in 2..=n - 2 {
            let w = vanishing(&tangent_table, q, None, None, None);
            match w.decision {
                Decision::Holds => certs.extend(w.certificate),
                Decision::Fails => {
                    v.decision = Decision::Fails;
                    v.witnesses.extend(w.witnesses);
                }
                Decision::Undetermined => {
                    if v.decision == Decision::Holds {
                        v.decision = Decision::Undetermined;
                    }
                    v.witnesses.extend(w.witnesses);
                }
            }
        }
        if v.decision == Decision::Holds {
            v.certificate = Some(certs.join("; "));
        }
        Some(v)
    } else {
        None
    };
    items.push(LemmaItem {
        item: "(iii)",
        statement: "h^q(F(p)) = 0 for 2 <= q <= n-2".into(),
        verdict: iii,
    });
    let iv = if acm {
        let mut v = vanishing(&tangent_table, n - 1, None, None, Some(-ni - 1));
        let at = tangent_table.get(n - 1, -ni - 1);
        let w = Witness::new(n - 1, -ni - 1, at);
        match at {
            Some(x) if x.lo() > 1 => {
                v.decision = Decision::Fails;
                v.witnesses.push(w);
            }
            Some(x) if x.hi().is_some_and(|h| h <= 1) => v.witnesses.insert(0, w),
            _ => {
                if v.decision == Decision::Holds {
                    v.decision = Decision::Undetermined;
                }
                v.witnesses.push(w);
            }
        }
        Some(v)
    } else {
        None
    };
    items.push(LemmaItem {
        item: "(iv)",
        statement: format!(
            "h^{}(F(p)) = 0 for p != {}, h^{}(F({})) <= 1",
            n - 1,
            -ni - 1,
            n - 1,
            -ni - 1
        ),
        verdict: iv,
    });
    Ok(LemmaReport {
        n,
        d,
        tangent_table,
        ideal_table,
        ideal_acm,
        items,
        chase: result,
    })
}

/// The odd-dimensional argument: with every lemma item established, the
/// Beilinson bound `n * h^{n-1}(F(-n-1))` is compared with the rank `n - 1`
/// of a codimension-one tangent sheaf.
#[derive(Clone, Debug)]
pub struct RankContradiction {
    pub bound: u64,
    pub budget: u64,
    pub contradiction: bool,
    pub lemma: LemmaReport,
}

pub fn beilinson_contradiction(
    tangent: &TangentData,
    ideal: Option<&CohomologyTable>,
    d: i64,
    n: usize,
) -> Result<RankContradiction> {
    let lemma = distribution_cohomology_bounds(tangent, ideal, d, n)?;
    let bound = beilinson_rank_bound(&lemma.tangent_table, n)?;
    let budget = n as u64 - 1;
    Ok(RankContradiction {
        bound,
        budget,
        contradiction: bound > budget,
        lemma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::table;
    use crate::criteria::{buchsbaum_numeric, regularity};

    #[test]
    fn les_on_degenerate_triple() {
        // 0 -> 0 -> B -> C -> 0 forces C = B
        let n = 3;
        let b = VirtualSheaf::cotangent(n);
        let tr = ExactTriple::new(
            Term::Zero,
            Term::Known(b.clone()),
            Term::unknown("C"),
            "copy",
        );
        let out = chase(n, &[tr], &[]).unwrap();
        let c = &out.tables["C"];
        for q in 0..=n {
            for t in -6..6 {
                assert_eq!(c.get(q, t), Some(Dim::exact(b.dim(q, t))), "q={q} t={t}");
            }
        }
    }

    #[test]
    fn les_bounds_intervals() {
        // 0 -> [0,inf) -> 3 -> [0,inf) -> 0 leaves both ends in [0, 3]
        let seq = [Dim::UNBOUNDED, Dim::exact(3), Dim::UNBOUNDED];
        let out = les_bounds(&seq).unwrap();
        assert_eq!(out[0], Dim::interval(0, Some(3)));
        assert_eq!(out[2], Dim::interval(0, Some(3)));
        assert!(les_bounds(&[Dim::exact(1), Dim::ZERO]).is_none());
        assert_eq!(
            les_bounds(&[Dim::exact(2), Dim::UNBOUNDED, Dim::ZERO]).unwrap()[1],
            Dim::exact(2)
        );
    }

    #[test]
    fn cycles_are_rejected() {
        let a = ExactTriple::new(
            Term::unknown("X"),
            Term::Known(VirtualSheaf::cotangent(3)),
            Term::unknown("Y"),
            "a",
        );
        let b = ExactTriple::new(
            Term::unknown("Y"),
            Term::Known(VirtualSheaf::cotangent(3)),
            Term::unknown("X"),
            "b",
        );
        assert!(matches!(chase(3, &[a, b], &[]), Err(Error::Cycle(_))));
    }

    #[test]
    fn unconstrained_query_is_unbounded() {
        let out = chase(
            3,
            &[],
            &[Query {
                unknown: "U".into(),
                q: 1,
                lo: 0,
                hi: 2,
            }],
        )
        .unwrap();
        assert!(out.answers[0].unbounded);
        assert!(out.unconstrained.contains("U"));
    }

    #[test]
    fn tangent_complex_shapes() {
        let f = SplitBundle::new(4, vec![-1, -2]).unwrap();
        let trs = en_complex_tangent(&f, 4).unwrap();
        assert_eq!(trs.len(), 2);
        // first triple: Ω^4 ⊗ S_2(F)(c) -> Ω^3 ⊗ F(c) -> K0, with c = -3
        let Term::Known(a) = &trs[0].a else { panic!() };
        let expect = VirtualSheaf::new(
            4,
            [
                (SheafAtom::Line(-10), 1),
                (SheafAtom::Line(-11), 1),
                (SheafAtom::Line(-12), 1),
            ],
        )
        .unwrap();
        assert_eq!(a, &expect);
        let f1 = SplitBundle::new(3, vec![-1, -1]).unwrap();
        assert_eq!(en_complex_tangent(&f1, 3).unwrap().len(), 1);
    }

    #[test]
    fn split_tangent_gives_acm() {
        let f = SplitBundle::new(4, vec![-1, -2]).unwrap();
        let out = chase_ideal(&en_complex_tangent(&f, 4).unwrap(), 4, -5, 5).unwrap();
        let iz = &out.tables[IDEAL];
        assert!(acm_check(iz, 1).unwrap().holds());
        assert!(out.euler_checks > 0);
    }

    #[test]
    fn pfaff_r1_matches_direct_sequence() {
        // 0 -> E -> Ω^1 -> I_Z(d-1) -> 0 with d = -c - n
        let n = 3;
        let e = SplitBundle::new(n, vec![-2, -2]).unwrap();
        let en = chase_ideal(&en_complex_pfaff(&e, 1, n).unwrap(), n, -6, 6).unwrap();
        let d = -e.c1() - n as i64;
        let direct = ExactTriple::new(
            Term::Known(VirtualSheaf::from_split(&e)),
            Term::Known(VirtualSheaf::cotangent(n)),
            Term::unknown_shifted(IDEAL, d - 1),
            "direct",
        );
        let dr = chase_ideal(&[direct], n, -6, 6).unwrap();
        for q in 0..=n {
            for t in -6..=6 {
                assert_eq!(
                    en.tables[IDEAL].get(q, t),
                    dr.tables[IDEAL].get(q, t),
                    "q={q} t={t}"
                );
            }
        }
    }

    #[test]
    fn pfaff_r2_rows() {
        for n in 5..=7usize {
            let e = SplitBundle::uniform(n, -2, n - 2).unwrap();
            let c = e.c1();
            let out = chase_ideal(&en_complex_pfaff(&e, 2, n).unwrap(), n, -10, 10).unwrap();
            let iz = &out.tables[IDEAL];
            assert!(iz.scan(1, None, None).vanishes());
            for p in 3..=n - 3 {
                assert!(iz.scan(p, None, None).vanishes(), "n={n} p={p}");
            }
            let t0 = -c - n as i64 - 1;
            let scan = iz.scan(2, None, None);
            assert!(scan.complete && scan.uncertain.is_empty());
            assert_eq!(scan.nonzero, vec![(t0, Dim::exact(1))]);
            assert!(buchsbaum_numeric(iz, n - 3).unwrap().holds());
            assert!(acm_check(iz, n - 3).unwrap().fails());
            let p = out.provenance_of(IDEAL, 2, t0).unwrap();
            assert_eq!(p.replay().unwrap(), Dim::exact(1));
        }
    }

    #[test]
    fn unrealizable_tangent_is_inconsistent() {
        // O(2) has no nonzero map to T_{P^3}
        let f = SplitBundle::new(3, vec![2, 0]).unwrap();
        let err = chase_ideal(&en_complex_tangent(&f, 3).unwrap(), 3, -4, 4).unwrap_err();
        assert!(matches!(err, Error::Inconsistent(_)));
    }

    #[test]
    fn pfaff_rejects_unsupported_r() {
        let e = SplitBundle::uniform(7, -2, 3).unwrap();
        assert!(matches!(
            en_complex_pfaff(&e, 4, 7),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn two_skew_lines() {
        let res = ResolutionData {
            n: 3,
            left: vec![2, 2],
            omegas: vec![(1, 0, 1)],
            lines: vec![],
        };
        let iz = omega_resolution_cohomology(&res).unwrap();
        assert_eq!(iz.get(1, 0), Some(Dim::exact(1)));
        assert!(acm_check(&iz, 1).unwrap().fails());
        assert!(buchsbaum_numeric(&iz, 1).unwrap().holds());
        assert_eq!(regularity(&iz).unwrap(), 2);
        assert_eq!(iz.get(0, 2), Some(Dim::exact(4)));
    }

    #[test]
    fn line_bundle_resolution_is_acm() {
        // twisted cubic: 0 -> O(-3)^2 -> O(-2)^3 -> I -> 0
        let res = ResolutionData {
            n: 3,
            left: vec![3, 3],
            omegas: vec![],
            lines: vec![2, 2, 2],
        };
        let iz = omega_resolution_cohomology(&res).unwrap();
        assert!(acm_check(&iz, 1).unwrap().holds());
        assert_eq!(iz.get(0, 2), Some(Dim::exact(3)));
    }

    #[test]
    fn lemma_items_for_split_tangent() {
        for n in 3..=6usize {
            // F = O(1)^{n-2} + O(1 - d) has degree d
            for d in 0..=2i64 {
                let mut tw = vec![1; n - 2];
                tw.push(1 - d);
                let f = SplitBundle::new(n, tw).unwrap();
                let rep =
                    distribution_cohomology_bounds(&TangentData::Split(f), None, d, n).unwrap();
                assert!(rep.ideal_acm.holds(), "n={n} d={d}");
                for item in &rep.items {
                    if item.item == "(iii)" && n < 4 {
                        continue;
                    }
                    assert!(
                        item.verdict.as_ref().unwrap().holds(),
                        "n={n} d={d} {}",
                        item.item
                    );
                }
            }
        }
    }

    #[test]
    fn tangent_fixture_gives_contradiction() {
        for n in [5usize, 7] {
            let t = table(&VirtualSheaf::tangent(n), -12, 12).unwrap();
            let rc = beilinson_contradiction(&TangentData::Table(Arc::new(t)), None, 0, n).unwrap();
            assert_eq!(rc.bound, n as u64);
            assert!(rc.contradiction);
        }
    }
}
