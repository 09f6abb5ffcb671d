//! Exact and heuristic search for nonincident point/line sets, plus the
//! certificate format that witnesses them.
//!
//! `f` — the largest s such that some s points and s lines are mutually
//! nonincident — is computed by maximizing over point sets only: for a
//! fixed point set Y the best possible line set is exactly the set of
//! lines disjoint from Y, so the search branches on points and carries the
//! external-line bitset incrementally. Pruning uses the running incumbent
//! together with the exact order-level cap from [`crate::bounds`].
//!
//! The brute-force oracle shares nothing with the solver beyond plane
//! incidence queries, so the two can check each other.

use std::sync::atomic::{AtomicBool, AtomicU32, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::bits;
use crate::bounds;
use crate::plane::{LineSet, Plane, PlaneError, PointSet};

/// Hard limit on the subset count the brute-force oracle will enumerate.
pub const ORACLE_SUBSET_LIMIT: u64 = 10_000_000;

/// Default branch-and-bound node budget.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("brute-force oracle limit exceeded: C({n},{s}) > {max}")]
    TooLarge { n: u32, s: u32, max: u64 },
    #[error("certificate names plane {found:?}, expected {expected:?}")]
    PlaneMismatch { expected: String, found: String },
    #[error("malformed certificate: {0}")]
    BadCertificate(String),
    #[error("invalid search configuration: {0}")]
    BadConfig(String),
    #[error("initial certificate does not verify against the plane")]
    SeedCertificateInvalid,
    #[error(transparent)]
    Plane(#[from] PlaneError),
}

/// Parameters of a Denniston arc, recorded on certificates derived from one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcTag {
    pub v: u32,
    pub u: u32,
    /// Element index of the quadratic-form coefficient b.
    pub b: u32,
    /// Element indices spanning the additive subgroup H.
    pub basis: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Search,
    ArcConstruction,
    Manual,
}

/// A pair (Y, M) of point and line sets claimed mutually nonincident,
/// with enough provenance to reproduce and re-verify it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonincidenceCertificate {
    plane_ref: String,
    points: PointSet,
    lines: LineSet,
    declared_size: u32,
    provenance: Provenance,
    arc: Option<ArcTag>,
}

impl NonincidenceCertificate {
    pub fn new(
        plane: &Plane,
        points: PointSet,
        lines: LineSet,
        provenance: Provenance,
    ) -> Result<Self, SearchError> {
        plane.check_set(points.plane_id())?;
        plane.check_set(lines.plane_id())?;
        if points.len() != lines.len() {
            return Err(SearchError::BadCertificate(format!(
                "{} points but {} lines",
                points.len(),
                lines.len()
            )));
        }
        let declared_size = points.len();
        Ok(NonincidenceCertificate {
            plane_ref: plane.reference().to_owned(),
            points,
            lines,
            declared_size,
            provenance,
            arc: None,
        })
    }

    pub(crate) fn with_arc_tag(mut self, tag: ArcTag) -> Self {
        self.arc = Some(tag);
        self
    }

    pub fn plane_ref(&self) -> &str {
        &self.plane_ref
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn lines(&self) -> &LineSet {
        &self.lines
    }

    pub fn size(&self) -> u32 {
        self.declared_size
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn arc_tag(&self) -> Option<&ArcTag> {
        self.arc.as_ref()
    }

    /// Serialize to the certificate text format:
    ///
    /// ```text
    /// CERT s=<s>
    /// PLANE <digest-or-tag>
    /// Y <s space-separated point indices>
    /// M <s space-separated line indices>
    /// ARC denniston v=<v> u=<u> b=<index> H=<basis indices>
    /// ```
    ///
    /// The `ARC` line appears only for arc-derived certificates.
    pub fn to_text(&self) -> String {
        let mut out = format!("CERT s={}\nPLANE {}\n", self.declared_size, self.plane_ref);
        for (label, idx) in [("Y", self.points.indices()), ("M", self.lines.indices())] {
            out.push_str(label);
            for i in idx {
                out.push(' ');
                out.push_str(&i.to_string());
            }
            out.push('\n');
        }
        if let Some(tag) = &self.arc {
            let basis = tag
                .basis
                .iter()
                .map(|b| b.to_string())
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!(
                "ARC denniston v={} u={} b={} H={}\n",
                tag.v, tag.u, tag.b, basis
            ));
        }
        out
    }

    /// Parse the certificate format against a concrete plane. The plane
    /// reference must name `plane`; indices are validated as sets. A parsed
    /// certificate carries `Manual` provenance unless an `ARC` line is
    /// present.
    pub fn from_text(plane: &Plane, text: &str) -> Result<Self, SearchError> {
        let bad = |msg: &str| SearchError::BadCertificate(msg.to_owned());
        if !text.ends_with('\n') {
            return Err(bad("missing trailing newline"));
        }
        let mut lines = text.lines();
        let declared_size: u32 = lines
            .next()
            .and_then(|l| l.strip_prefix("CERT s="))
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| bad("first line must be `CERT s=<s>`"))?;
        let plane_ref = lines
            .next()
            .and_then(|l| l.strip_prefix("PLANE "))
            .ok_or_else(|| bad("second line must be `PLANE <digest-or-tag>`"))?
            .to_owned();
        if !plane.matches_reference(&plane_ref) {
            return Err(SearchError::PlaneMismatch {
                expected: plane.reference().to_owned(),
                found: plane_ref,
            });
        }
        let mut parse_indices = |label: &str| -> Result<Vec<u32>, SearchError> {
            let line = lines
                .next()
                .ok_or_else(|| bad(&format!("missing `{label}` line")))?;
            let rest = line
                .strip_prefix(label)
                .ok_or_else(|| bad(&format!("expected `{label}` line, got {line:?}")))?;
            rest.split_whitespace()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| bad(&format!("bad index {t:?} on `{label}` line")))
                })
                .collect()
        };
        let y = parse_indices("Y")?;
        let m = parse_indices("M")?;

        let mut provenance = Provenance::Manual;
        let mut arc = None;
        if let Some(line) = lines.next() {
            arc = Some(parse_arc_line(line)?);
            provenance = Provenance::ArcConstruction;
        }
        if lines.next().is_some() {
            return Err(bad("trailing content after certificate"));
        }

        Ok(NonincidenceCertificate {
            plane_ref,
            points: PointSet::new(plane, y)?,
            lines: LineSet::new(plane, m)?,
            declared_size,
            provenance,
            arc,
        })
    }
}

fn parse_arc_line(line: &str) -> Result<ArcTag, SearchError> {
    let bad = |msg: String| SearchError::BadCertificate(msg);
    let mut tokens = line.split_whitespace();
    if tokens.next() != Some("ARC") || tokens.next() != Some("denniston") {
        return Err(bad(format!("unrecognized provenance line {line:?}")));
    }
    let (mut v, mut u, mut b, mut basis) = (None, None, None, None);
    for tok in tokens {
        let (key, val) = tok
            .split_once('=')
            .ok_or_else(|| bad(format!("bad ARC field {tok:?}")))?;
        match key {
            "v" => v = val.parse().ok(),
            "u" => u = val.parse().ok(),
            "b" => b = val.parse().ok(),
            "H" => {
                basis = val
                    .split(',')
                    .map(|t| t.parse::<u32>().ok())
                    .collect::<Option<Vec<u32>>>()
            }
            _ => return Err(bad(format!("unknown ARC field {key:?}"))),
        }
    }
    match (v, u, b, basis) {
        (Some(v), Some(u), Some(b), Some(basis)) => Ok(ArcTag { v, u, b, basis }),
        _ => Err(bad(format!("incomplete ARC line {line:?}"))),
    }
}

/// True iff the certificate sizes are consistent and no point of Y lies on
/// any line of M. A certificate naming a different plane is an error, not
/// a failed verification.
pub fn verify_certificate(
    plane: &Plane,
    cert: &NonincidenceCertificate,
) -> Result<bool, SearchError> {
    if !plane.matches_reference(&cert.plane_ref) {
        return Err(SearchError::PlaneMismatch {
            expected: plane.reference().to_owned(),
            found: cert.plane_ref.clone(),
        });
    }
    // PlaneId is content-derived, so equal planes accept each other's sets.
    if cert.points.plane_id() != plane.id() || cert.lines.plane_id() != plane.id() {
        return Err(SearchError::PlaneMismatch {
            expected: plane.reference().to_owned(),
            found: cert.plane_ref.clone(),
        });
    }
    if cert.points.len() != cert.declared_size || cert.lines.len() != cert.declared_size {
        return Ok(false);
    }
    let m_bits = cert.lines.to_bits(plane);
    for &p in cert.points.indices() {
        if bits::intersection_count(plane.point_row(p), &m_bits) != 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustively test whether some s-subset of points has at least s
/// external lines. No pruning, no shared code with the exact solver beyond
/// plane queries; this is the independence oracle the solver is checked
/// against.
pub fn oracle_bruteforce(plane: &Plane, s: u32) -> Result<bool, SearchError> {
    let n = plane.size();
    if s == 0 {
        return Ok(true);
    }
    if s > n {
        return Ok(false);
    }
    match binomial_capped(n as u64, s as u64, ORACLE_SUBSET_LIMIT) {
        Some(_) => {}
        None => {
            return Err(SearchError::TooLarge {
                n,
                s,
                max: ORACLE_SUBSET_LIMIT,
            })
        }
    }
    for comb in (0..n).combinations(s as usize) {
        let mut external = 0u32;
        for l in 0..n {
            if comb.iter().all(|&p| !plane.incident_unchecked(p, l)) {
                external += 1;
            }
        }
        if external >= s {
            return Ok(true);
        }
    }
    Ok(false)
}

/// C(n, k) if it does not exceed `cap`.
fn binomial_capped(n: u64, k: u64, cap: u64) -> Option<u64> {
    let k = k.min(n - k);
    let mut c = 1u128;
    for i in 0..k {
        c = c * (n as u128 - i as u128) / (i as u128 + 1);
        if c > cap as u128 {
            return None;
        }
    }
    Some(c as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    /// The search tree was exhausted; the value is exact.
    Proven,
    /// The node budget ran out; the value is the best incumbent found.
    BudgetExhausted,
}

/// Branch-and-bound configuration.
#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub node_budget: u64,
    pub workers: usize,
    /// When set, the returned certificate is identical across runs and
    /// worker counts for proven searches: ties at the incumbent value are
    /// explored and the lexicographically least witness is kept.
    pub deterministic: bool,
    /// Optional verified certificate used as the starting incumbent.
    pub initial: Option<NonincidenceCertificate>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: DEFAULT_NODE_BUDGET,
            workers: 1,
            deterministic: true,
            initial: None,
        }
    }
}

#[derive(Debug)]
pub struct ExactSearch {
    pub value: u32,
    pub certificate: NonincidenceCertificate,
    pub status: SearchStatus,
    pub nodes: u64,
}

struct Incumbent {
    value: u32,
    points: Vec<u32>,
    lines: Vec<u32>,
}

struct Shared<'p> {
    plane: &'p Plane,
    cap: u32,
    deterministic: bool,
    budget: u64,
    value: AtomicU32,
    nodes: AtomicU64,
    stopped: AtomicBool,
    best: Mutex<Incumbent>,
}

impl Shared<'_> {
    /// Account for one visited node; false means the budget is exhausted.
    fn enter_node(&self) -> bool {
        if self.stopped.load(Ordering::Relaxed) {
            return false;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.stopped.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    /// Whether a subtree with upper bound `ub` can be skipped. In
    /// deterministic mode ties are kept so every optimal witness is seen.
    fn prunable(&self, ub: u32) -> bool {
        let inc = self.value.load(Ordering::Relaxed);
        if self.deterministic {
            ub < inc
        } else {
            ub <= inc
        }
    }

    /// Offer the candidate at a node: Y (ascending) with external set E.
    fn offer(&self, y: &[u32], e: &[u64]) {
        let val = (y.len() as u32).min(bits::count_ones(e));
        let inc = self.value.load(Ordering::Relaxed);
        if val < inc || (val == inc && !self.deterministic) || val == 0 {
            return;
        }
        let points: Vec<u32> = y[..val as usize].to_vec();
        let lines: Vec<u32> = bits::iter_ones(e).take(val as usize).collect();
        let mut best = self.best.lock().unwrap();
        let replace = val > best.value
            || (val == best.value
                && self.deterministic
                && (&points, &lines) < (&best.points, &best.lines));
        if replace {
            best.value = val;
            best.points = points;
            best.lines = lines;
            self.value.fetch_max(val, Ordering::Relaxed);
        }
    }
}

/// Compute f for a plane by depth-first branch-and-bound over point sets
/// in canonical index order.
///
/// The result is `Proven` only when the pruned tree was exhausted within
/// the node budget; otherwise the best incumbent is returned with
/// `BudgetExhausted`. The optimum value is independent of worker count and
/// scheduling; with `deterministic` set, the certificate of a proven run
/// is as well.
pub fn exact_f(plane: &Plane, cfg: &SearchConfig) -> Result<ExactSearch, SearchError> {
    if cfg.node_budget == 0 {
        return Err(SearchError::BadConfig("node budget must be >= 1".into()));
    }
    if cfg.workers == 0 {
        return Err(SearchError::BadConfig("worker count must be >= 1".into()));
    }

    let n = plane.size();
    let cap = bounds::nonincidence_bound(plane.q() as u64) as u32;
    let mut start = Incumbent {
        value: 0,
        points: Vec::new(),
        lines: Vec::new(),
    };
    if let Some(seed) = &cfg.initial {
        if !verify_certificate(plane, seed)? {
            return Err(SearchError::SeedCertificateInvalid);
        }
        start.value = seed.size();
        start.points = seed.points().indices().to_vec();
        start.lines = seed.lines().indices().to_vec();
    }

    let shared = Shared {
        plane,
        cap,
        deterministic: cfg.deterministic,
        budget: cfg.node_budget,
        value: AtomicU32::new(start.value),
        nodes: AtomicU64::new(0),
        stopped: AtomicBool::new(false),
        best: Mutex::new(start),
    };

    let full = bits::full_row(n as usize);
    // Root node: the empty set.
    if shared.enter_node() {
        shared.offer(&[], &full);
        let next_task = AtomicUsize::new(0);
        thread::scope(|scope| {
            for _ in 0..cfg.workers {
                scope.spawn(|| worker(&shared, &next_task, &full));
            }
        });
    }

    let stopped = shared.stopped.load(Ordering::Relaxed);
    let nodes = shared.nodes.load(Ordering::Relaxed).min(cfg.node_budget);
    let best = shared.best.into_inner().unwrap();
    let certificate = NonincidenceCertificate::new(
        plane,
        PointSet::new(plane, best.points)?,
        LineSet::new(plane, best.lines)?,
        Provenance::Search,
    )?;
    debug_assert_eq!(verify_certificate(plane, &certificate), Ok(true));
    Ok(ExactSearch {
        value: best.value,
        certificate,
        status: if stopped {
            SearchStatus::BudgetExhausted
        } else {
            SearchStatus::Proven
        },
        nodes,
    })
}

/// Claim depth-1 subtrees (choices of least point index) off a shared
/// counter and solve each sequentially.
fn worker(shared: &Shared, next_task: &AtomicUsize, full: &[u64]) {
    let n = shared.plane.size();
    let w = shared.plane.words_per_row();
    // One external-set row per recursion depth; depth is bounded by the
    // number of points, not by the value cap.
    let mut arena = vec![0u64; w * (n as usize + 2)];
    let mut y: Vec<u32> = Vec::new();
    loop {
        if shared.stopped.load(Ordering::Relaxed) {
            return;
        }
        let i = next_task.fetch_add(1, Ordering::Relaxed) as u32;
        if i >= n {
            return;
        }
        let (e, rest) = arena.split_at_mut(w);
        e.copy_from_slice(full);
        bits::and_not_into(e, shared.plane.point_row(i));
        let e_count = bits::count_ones(e);
        let ub = upper_bound(1 + (n - 1 - i), e_count, shared.cap);
        if shared.prunable(ub) {
            continue;
        }
        y.clear();
        y.push(i);
        dfs(shared, &mut y, i + 1, e, e_count, rest, w);
    }
}

fn upper_bound(max_size: u32, e_count: u32, cap: u32) -> u32 {
    max_size.min(e_count).min(cap)
}

/// Visit the node with point set `y` (ascending) and external row `e`,
/// then branch on every candidate index in `start..n`.
fn dfs(
    shared: &Shared,
    y: &mut Vec<u32>,
    start: u32,
    e: &[u64],
    e_count: u32,
    arena: &mut [u64],
    w: usize,
) {
    if !shared.enter_node() {
        return;
    }
    shared.offer(y, e);
    // Nothing below can beat a node whose external set is already exhausted.
    if e_count == 0 {
        return;
    }
    let n = shared.plane.size();
    let depth_size = y.len() as u32 + 1;
    let (child, rest) = arena.split_at_mut(w);
    for i in start..n {
        if shared.stopped.load(Ordering::Relaxed) {
            return;
        }
        child.copy_from_slice(e);
        bits::and_not_into(child, shared.plane.point_row(i));
        let child_count = bits::count_ones(child);
        let ub = upper_bound(depth_size + (n - 1 - i), child_count, shared.cap);
        if shared.prunable(ub) {
            continue;
        }
        y.push(i);
        dfs(shared, y, i + 1, child, child_count, rest, w);
        y.pop();
    }
}

/// Randomized greedy construction with single-point swap hill-climbing.
///
/// The seed picks the starting point and the swap scan order; within the
/// growth phase ties between candidates are broken by least index. The
/// result is a valid (not necessarily optimal) certificate, identical for
/// identical seeds.
pub fn greedy_heuristic(plane: &Plane, seed: u64) -> NonincidenceCertificate {
    let n = plane.size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let full = bits::full_row(n as usize);
    let mut y: Vec<u32> = Vec::new();
    let mut in_y = vec![false; n as usize];
    let mut e = full.clone();

    let add = |y: &mut Vec<u32>, in_y: &mut Vec<bool>, e: &mut Vec<u64>, x: u32| {
        y.push(x);
        in_y[x as usize] = true;
        bits::and_not_into(e, plane.point_row(x));
    };

    let value = |y_len: usize, e: &[u64]| (y_len as u32).min(bits::count_ones(e));

    let first = rng.gen_range(0..n);
    add(&mut y, &mut in_y, &mut e, first);
    let mut best = (value(1, &e), y.clone(), e.clone());

    loop {
        // Growth: repeatedly add the point killing the fewest external
        // lines, remembering the best prefix.
        while bits::count_ones(&e) > 0 && (y.len() as u32) < n {
            let mut pick = None;
            let mut fewest = u32::MAX;
            for x in 0..n {
                if !in_y[x as usize] {
                    let kills = bits::intersection_count(plane.point_row(x), &e);
                    if kills < fewest {
                        fewest = kills;
                        pick = Some(x);
                    }
                }
            }
            let Some(x) = pick else { break };
            add(&mut y, &mut in_y, &mut e, x);
            let val = value(y.len(), &e);
            if val > best.0 {
                best = (val, y.clone(), e.clone());
            }
        }

        // Restore the best state seen so far and try improving swaps.
        y = best.1.clone();
        e = best.2.clone();
        in_y.fill(false);
        for &p in &y {
            in_y[p as usize] = true;
        }

        let rebuild = |members: &[u32]| -> Vec<u64> {
            let mut out = full.clone();
            for &p in members {
                bits::and_not_into(&mut out, plane.point_row(p));
            }
            out
        };

        let mut outs = y.clone();
        outs.shuffle(&mut rng);
        let mut ins: Vec<u32> = (0..n).filter(|&x| !in_y[x as usize]).collect();
        ins.shuffle(&mut rng);

        let mut improved = false;
        'swap: for &out in &outs {
            let keep: Vec<u32> = y.iter().copied().filter(|&p| p != out).collect();
            for &inp in &ins {
                let mut trial = keep.clone();
                trial.push(inp);
                let trial_e = rebuild(&trial);
                if value(trial.len(), &trial_e) > best.0 {
                    y = trial;
                    e = trial_e;
                    in_y.fill(false);
                    for &p in &y {
                        in_y[p as usize] = true;
                    }
                    best = (value(y.len(), &e), y.clone(), e.clone());
                    improved = true;
                    break 'swap;
                }
            }
        }
        if !improved {
            break;
        }
    }

    let (val, mut members, ext) = best;
    members.sort_unstable();
    members.truncate(val as usize);
    let lines: Vec<u32> = bits::iter_ones(&ext).take(val as usize).collect();
    let certificate = NonincidenceCertificate::new(
        plane,
        PointSet::new(plane, members).expect("greedy members are valid points"),
        LineSet::new(plane, lines).expect("greedy lines are valid"),
        Provenance::Search,
    )
    .expect("greedy certificate sizes match by construction");
    debug_assert_eq!(verify_certificate(plane, &certificate), Ok(true));
    certificate
}
