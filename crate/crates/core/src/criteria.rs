//! Decision procedures on cohomology tables.

use std::fmt;
use std::ops::RangeInclusive;

use serde_json::{json, Value};

use crate::cohomology::{CohomologyTable, Dim, Window};
use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    Holds,
    Fails,
    Undetermined,
}

impl Decision {
    pub fn as_str(&self) -> &'static str {
        match self {
            Decision::Holds => "holds",
            Decision::Fails => "fails",
            Decision::Undetermined => "undetermined",
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A table entry cited by a verdict. `value` is `None` when the table has no
/// information at that position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Witness {
    pub q: usize,
    pub twist: i64,
    pub value: Option<Dim>,
}

impl Witness {
    pub fn new(q: usize, twist: i64, value: Option<Dim>) -> Self {
        Witness { q, twist, value }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Some(v) => write!(f, "(q={}, t={}, {})", self.q, self.twist, v),
            None => write!(f, "(q={}, t={}, ?)", self.q, self.twist),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub decision: Decision,
    pub witnesses: Vec<Witness>,
    /// For `holds` without witnesses: the rows and windows that were exhausted.
    pub certificate: Option<String>,
    /// The condition responsible for the decision, when a criterion has several.
    pub clause: Option<String>,
}

impl Verdict {
    fn new(decision: Decision) -> Self {
        Verdict {
            decision,
            witnesses: Vec::new(),
            certificate: None,
            clause: None,
        }
    }

    pub fn holds(&self) -> bool {
        self.decision == Decision::Holds
    }

    pub fn fails(&self) -> bool {
        self.decision == Decision::Fails
    }

    pub fn to_json(&self) -> Value {
        let w: Vec<Value> = self
            .witnesses
            .iter()
            .map(|w| json!([w.q, w.twist, w.value.map_or(Value::Null, |d| d.to_json())]))
            .collect();
        json!({
            "decision": self.decision.as_str(),
            "witnesses": w,
            "certificate": self.certificate,
            "clause": self.clause,
        })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.decision)?;
        if let Some(c) = &self.clause {
            write!(f, " [condition {c}]")?;
        }
        for w in &self.witnesses {
            write!(f, " {w}")?;
        }
        if let Some(c) = &self.certificate {
            write!(f, " ({c})")?;
        }
        Ok(())
    }
}

/// Holds iff every row in `rows` vanishes at every twist.
fn rows_vanish(table: &CohomologyTable, rows: RangeInclusive<usize>) -> Verdict {
    let (first, last) = (*rows.start(), *rows.end());
    let mut nonzero = Vec::new();
    let mut uncertain = Vec::new();
    let mut windows = Vec::new();
    for q in rows {
        let scan = table.scan(q, None, None);
        nonzero.extend(
            scan.nonzero
                .iter()
                .map(|&(t, d)| Witness::new(q, t, Some(d))),
        );
        uncertain.extend(scan.uncertain.iter().map(|&(t, d)| Witness::new(q, t, d)));
        if !scan.complete {
            let row = table.row(q);
            let why = if row.certified {
                format!("window {} is unbounded", row.window)
            } else {
                "uncertified".into()
            };
            uncertain.push(Witness::new(
                q,
                row.dims.keys().next().copied().unwrap_or(0),
                None,
            ));
            windows.push(format!("row {q} {why}"));
        } else {
            windows.push(format!("row {q} window {}", table.row(q).window));
        }
    }
    if !nonzero.is_empty() {
        let mut v = Verdict::new(Decision::Fails);
        v.witnesses = nonzero;
        return v;
    }
    if !uncertain.is_empty() {
        let mut v = Verdict::new(Decision::Undetermined);
        v.witnesses = uncertain;
        v.certificate = Some(windows.join("; "));
        return v;
    }
    let mut v = Verdict::new(Decision::Holds);
    v.certificate = Some(if first > last {
        "empty range of rows".into()
    } else {
        format!("rows {first}..{last} exhausted: {}", windows.join("; "))
    });
    v
}

fn check_dim(table: &CohomologyTable, n: usize) -> Result<()> {
    if table.ambient_dim() != n {
        return invalid(format!(
            "table lives on P^{} but n = {n}",
            table.ambient_dim()
        ));
    }
    Ok(())
}

/// Horrocks: no intermediate cohomology in rows `1..=n-1`.
pub fn horrocks(table: &CohomologyTable) -> Verdict {
    let n = table.ambient_dim();
    rows_vanish(table, 1..=n.saturating_sub(1))
}

/// Evans-Griffith: rows `1..=rank-1` vanish.
pub fn evans_griffith(table: &CohomologyTable, rank: usize, n: usize) -> Result<Verdict> {
    check_dim(table, n)?;
    if rank == 0 {
        return invalid("rank must be positive");
    }
    if rank > n {
        return Err(Error::Inapplicable(format!("rank {rank} exceeds n = {n}")));
    }
    Ok(rows_vanish(table, 1..=rank - 1))
}

/// Kumar-Peterson-Rao: rows `2..=n-2` vanish, for `rank <= n-1` with `n`
/// even or `rank <= n-2` with `n` odd.
pub fn kpr(table: &CohomologyTable, rank: usize, n: usize) -> Result<Verdict> {
    check_dim(table, n)?;
    if rank == 0 {
        return invalid("rank must be positive");
    }
    let bound = if n.is_multiple_of(2) {
        n - 1
    } else {
        n.saturating_sub(2)
    };
    if rank > bound {
        return Err(Error::Inapplicable(format!(
            "needs rank <= {bound} on P^{n} ({} n), got rank {rank}",
            if n.is_multiple_of(2) { "even" } else { "odd" }
        )));
    }
    Ok(rows_vanish(table, 2..=n.saturating_sub(2)))
}

fn check_dim_z(table: &CohomologyTable, dim_z: usize) -> Result<()> {
    if dim_z >= table.ambient_dim() {
        return invalid(format!(
            "dim Z = {dim_z} must be below n = {}",
            table.ambient_dim()
        ));
    }
    Ok(())
}

/// ACM: rows `1..=dim_z` of the ideal-sheaf table vanish.
pub fn acm_check(ideal_table: &CohomologyTable, dim_z: usize) -> Result<Verdict> {
    check_dim_z(ideal_table, dim_z)?;
    Ok(rows_vanish(ideal_table, 1..=dim_z))
}

/// The Stückrad-Vogel conditions, read numerically.
///
/// Condition (ii) is decided exactly. Condition (i) concerns multiplication
/// maps, so only the sufficient test "the target group is zero" is used;
/// when that test is inconclusive the verdict is `undetermined`.
pub fn buchsbaum_numeric(ideal_table: &CohomologyTable, dim_z: usize) -> Result<Verdict> {
    check_dim_z(ideal_table, dim_z)?;
    // Possibly nonzero entries per row; an inexhaustible row is undetermined outright.
    let mut support: Vec<Vec<(i64, Option<Dim>)>> = vec![Vec::new(); dim_z + 1];
    for p in 1..=dim_z {
        let scan = ideal_table.scan(p, None, None);
        if !scan.complete {
            let mut v = Verdict::new(Decision::Undetermined);
            v.certificate = Some(format!("row {p} cannot be exhausted"));
            return Ok(v);
        }
        support[p] = scan
            .nonzero
            .iter()
            .map(|&(t, d)| (t, Some(d)))
            .chain(scan.uncertain.iter().copied())
            .collect();
        support[p].sort_by_key(|e| e.0);
    }
    let sure = |d: &Option<Dim>| d.is_some_and(|d| d.is_nonzero());

    let mut maybe_ii = Vec::new();
    for p in 1..=dim_z {
        for q in p + 1..=dim_z {
            for &(i, di) in &support[p] {
                for &(j, dj) in &support[q] {
                    if (p as i64 + i) - (q as i64 + j) != 1 {
                        continue;
                    }
                    let pair = [Witness::new(p, i, di), Witness::new(q, j, dj)];
                    if sure(&di) && sure(&dj) {
                        let mut v = Verdict::new(Decision::Fails);
                        v.witnesses = pair.to_vec();
                        v.clause = Some("(ii)".into());
                        return Ok(v);
                    }
                    maybe_ii.extend(pair);
                }
            }
        }
    }
    if !maybe_ii.is_empty() {
        let mut v = Verdict::new(Decision::Undetermined);
        v.witnesses = maybe_ii;
        v.clause = Some("(ii)".into());
        return Ok(v);
    }

    let mut maybe_i = Vec::new();
    for p in 1..=dim_z {
        for &(i, di) in &support[p] {
            let next = ideal_table.get(p, i + 1);
            if !next.is_some_and(|d| d.is_zero()) {
                maybe_i.push(Witness::new(p, i, di));
                maybe_i.push(Witness::new(p, i + 1, next));
            }
        }
    }
    if !maybe_i.is_empty() {
        let mut v = Verdict::new(Decision::Undetermined);
        v.witnesses = maybe_i;
        v.clause = Some("(i)".into());
        return Ok(v);
    }

    let mut v = Verdict::new(Decision::Holds);
    for p in 1..=dim_z {
        v.witnesses
            .extend(support[p].iter().map(|&(t, d)| Witness::new(p, t, d)));
    }
    v.certificate = Some(format!(
        "rows 1..{dim_z} exhausted; no gap-1 pairs; each nonzero group maps into a zero group"
    ));
    Ok(v)
}

/// Castelnuovo-Mumford regularity: the least `m` with `h^p(I(m'-p)) = 0` for
/// all `p > 0` and `m' >= m`.
///
/// Entries that are unknown or straddle zero count as nonzero, so on
/// interval-valued tables the result is an upper bound.
pub fn regularity(ideal_table: &CohomologyTable) -> Result<i64> {
    let n = ideal_table.ambient_dim();
    let mut m: Option<i64> = None;
    for p in 1..=n {
        let row = ideal_table.row(p);
        if !row.certified {
            return invalid(format!("row {p} is not certified"));
        }
        let (lo, hi) = match row.window {
            Window::Empty => continue,
            Window::Range { hi: None, .. } => {
                return invalid(format!("row {p} window {} is unbounded above", row.window))
            }
            Window::Range { lo, hi: Some(hi) } => (lo, hi),
        };
        let mut t = hi;
        let last = loop {
            match row.get(t) {
                Some(d) if d.is_zero() => {}
                _ => break Some(t),
            }
            if lo.is_some_and(|l| t <= l) {
                break None;
            }
            t -= 1;
        };
        if let Some(t) = last {
            let need = t + p as i64 + 1;
            m = Some(m.map_or(need, |m| m.max(need)));
        }
    }
    m.ok_or_else(|| {
        Error::InvalidInput("rows 1..n vanish identically; regularity is unbounded below".into())
    })
}

/// Rank lower bound `n * h^{n-1}(F(-n-1))` from Beilinson's spectral sequence.
///
/// Requires `n >= 4` and the three vanishing hypotheses:
/// (i) `h^0(F(s)) = 0` for `s <= -2`;
/// (ii) `h^q(F(s)) = 0` for `-n-2 <= s <= -2`, `2 <= q <= n-2`;
/// (iii) `h^{n-1}(F(s)) = 0` for `s = -n-2` and `-n <= s <= -2`.
/// When `h^{n-1}(F(-n-1))` is only bracketed, its lower end is used.
pub fn beilinson_rank_bound(table: &CohomologyTable, n: usize) -> Result<u64> {
    check_dim(table, n)?;
    if n < 4 {
        return Err(Error::Inapplicable(format!("needs n >= 4, got {n}")));
    }
    let ni = n as i64;
    let violated = |clause: &str, q: usize, lo: Option<i64>, hi: Option<i64>| -> Result<()> {
        let scan = table.scan(q, lo, hi);
        if let Some(&(t, d)) = scan.nonzero.first() {
            return Err(Error::Inapplicable(format!(
                "hypothesis {clause} fails: h^{q}(F({t})) = {d}"
            )));
        }
        if let Some(&(t, d)) = scan.uncertain.first() {
            let d = d.map_or("unknown".to_string(), |d| d.to_string());
            return Err(Error::Inapplicable(format!(
                "hypothesis {clause} not established: h^{q}(F({t})) = {d}"
            )));
        }
        if !scan.complete {
            return Err(Error::Inapplicable(format!(
                "hypothesis {clause} not established: row {q} cannot be exhausted"
            )));
        }
        Ok(())
    };
    violated("(i)", 0, None, Some(-2))?;
    for q in 2..=n - 2 {
        violated("(ii)", q, Some(-ni - 2), Some(-2))?;
    }
    violated("(iii)", n - 1, Some(-ni - 2), Some(-ni - 2))?;
    violated("(iii)", n - 1, Some(-ni), Some(-2))?;
    let a = table
        .get(n - 1, -ni - 1)
        .ok_or_else(|| Error::Inapplicable(format!("h^{}(F({})) is unknown", n - 1, -ni - 1)))?;
    Ok(n as u64 * a.lo())
}
