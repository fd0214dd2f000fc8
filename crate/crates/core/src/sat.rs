//! A small conflict-driven clause-learning SAT solver.
//!
//! Two watched literals, first-UIP learning, activity-ordered decisions with
//! index tie-breaking, phase saving and Luby restarts. Solving under
//! assumptions reports the subset of assumptions responsible for a refutation.
//! Everything is deterministic.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Not;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

impl Var {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn positive(self) -> Lit {
        Lit::new(self, false)
    }

    pub fn negative(self) -> Lit {
        Lit::new(self, true)
    }
}

/// A literal, encoded as `2 * var + negated`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, negated: bool) -> Self {
        Lit(var.0 * 2 + negated as u32)
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    pub fn is_negated(self) -> bool {
        self.0 & 1 == 1
    }

    fn code(self) -> usize {
        self.0 as usize
    }
}

impl Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_negated() {
            f.write_str("-")?;
        }
        write!(f, "x{}", self.var().0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SatStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
    pub restarts: u64,
}

impl SatStats {
    pub fn absorb(&mut self, other: &SatStats) {
        self.decisions += other.decisions;
        self.propagations += other.propagations;
        self.conflicts += other.conflicts;
        self.restarts += other.restarts;
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SatOptions {
    /// Conflicts allowed per `solve` call.
    pub conflict_budget: Option<u64>,
    /// Polarity tried first for unassigned variables.
    pub default_phase: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("conflict budget of {budget} exhausted")]
pub struct BudgetExceeded {
    pub budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveResult {
    Sat,
    Unsat,
}

const UNDEF: i8 = 0;
const TRUE: i8 = 1;
const FALSE: i8 = -1;

struct Clause {
    lits: Vec<Lit>,
    learnt: bool,
    deleted: bool,
    activity: f64,
}

#[derive(Clone, Copy)]
struct Watcher {
    clause: u32,
    blocker: Lit,
}

/// Max-heap of variables keyed by activity; lower index wins ties.
#[derive(Default)]
struct VarHeap {
    heap: Vec<u32>,
    position: Vec<Option<usize>>,
}

impl VarHeap {
    fn better(activity: &[f64], a: u32, b: u32) -> bool {
        let (x, y) = (activity[a as usize], activity[b as usize]);
        x > y || (x == y && a < b)
    }

    fn grow(&mut self, n: usize) {
        self.position.resize(n, None);
    }

    fn contains(&self, v: u32) -> bool {
        self.position[v as usize].is_some()
    }

    fn insert(&mut self, v: u32, activity: &[f64]) {
        if self.contains(v) {
            return;
        }
        self.heap.push(v);
        let i = self.heap.len() - 1;
        self.position[v as usize] = Some(i);
        self.up(i, activity);
    }

    fn pop(&mut self, activity: &[f64]) -> Option<u32> {
        if self.heap.is_empty() {
            return None;
        }
        let top = self.heap.swap_remove(0);
        self.position[top as usize] = None;
        if !self.heap.is_empty() {
            self.position[self.heap[0] as usize] = Some(0);
            self.down(0, activity);
        }
        Some(top)
    }

    fn bumped(&mut self, v: u32, activity: &[f64]) {
        if let Some(i) = self.position[v as usize] {
            self.up(i, activity);
        }
    }

    fn up(&mut self, mut i: usize, activity: &[f64]) {
        let v = self.heap[i];
        while i > 0 {
            let parent = (i - 1) / 2;
            if !Self::better(activity, v, self.heap[parent]) {
                break;
            }
            self.heap[i] = self.heap[parent];
            self.position[self.heap[i] as usize] = Some(i);
            i = parent;
        }
        self.heap[i] = v;
        self.position[v as usize] = Some(i);
    }

    fn down(&mut self, mut i: usize, activity: &[f64]) {
        let v = self.heap[i];
        loop {
            let left = 2 * i + 1;
            if left >= self.heap.len() {
                break;
            }
            let right = left + 1;
            let child = if right < self.heap.len() && Self::better(activity, self.heap[right], self.heap[left]) {
                right
            } else {
                left
            };
            if !Self::better(activity, self.heap[child], v) {
                break;
            }
            self.heap[i] = self.heap[child];
            self.position[self.heap[i] as usize] = Some(i);
            i = child;
        }
        self.heap[i] = v;
        self.position[v as usize] = Some(i);
    }
}

fn luby(y: f64, mut x: u64) -> f64 {
    let mut size = 1u64;
    let mut seq = 0i32;
    while size < x + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    let mut r = 1.0;
    for _ in 0..seq {
        r *= y;
    }
    r
}

pub struct Solver {
    options: SatOptions,
    clauses: Vec<Clause>,
    learnts: Vec<u32>,
    watches: Vec<Vec<Watcher>>,
    assigns: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Option<u32>>,
    polarity: Vec<bool>,
    activity: Vec<f64>,
    seen: Vec<bool>,
    heap: VarHeap,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    var_inc: f64,
    clause_inc: f64,
    max_learnts: f64,
    ok: bool,
    model: Vec<bool>,
    failed: Vec<Lit>,
    stats: SatStats,
    original_clauses: usize,
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new(SatOptions::default())
    }
}

impl Solver {
    pub fn new(options: SatOptions) -> Self {
        Solver {
            options,
            clauses: Vec::new(),
            learnts: Vec::new(),
            watches: Vec::new(),
            assigns: Vec::new(),
            level: Vec::new(),
            reason: Vec::new(),
            polarity: Vec::new(),
            activity: Vec::new(),
            seen: Vec::new(),
            heap: VarHeap::default(),
            trail: Vec::new(),
            trail_lim: Vec::new(),
            qhead: 0,
            var_inc: 1.0,
            clause_inc: 1.0,
            max_learnts: 0.0,
            ok: true,
            model: Vec::new(),
            failed: Vec::new(),
            stats: SatStats::default(),
            original_clauses: 0,
        }
    }

    pub fn set_conflict_budget(&mut self, budget: Option<u64>) {
        self.options.conflict_budget = budget;
    }

    pub fn new_var(&mut self) -> Var {
        let v = self.assigns.len() as u32;
        self.assigns.push(UNDEF);
        self.level.push(0);
        self.reason.push(None);
        self.polarity.push(self.options.default_phase);
        self.activity.push(0.0);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        self.heap.grow(self.assigns.len());
        self.heap.insert(v, &self.activity);
        Var(v)
    }

    pub fn num_vars(&self) -> usize {
        self.assigns.len()
    }

    /// Problem clauses added so far (after trivial simplification).
    pub fn num_clauses(&self) -> usize {
        self.original_clauses
    }

    pub fn stats(&self) -> SatStats {
        self.stats
    }

    /// False once the clause set is known to be unsatisfiable.
    pub fn is_ok(&self) -> bool {
        self.ok
    }

    fn value(&self, lit: Lit) -> i8 {
        let v = self.assigns[lit.var().index()];
        if lit.is_negated() {
            -v
        } else {
            v
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    /// Adds a clause. Returns `false` if the formula became trivially unsatisfiable.
    pub fn add_clause(&mut self, lits: &[Lit]) -> bool {
        debug_assert_eq!(self.decision_level(), 0);
        if !self.ok {
            return false;
        }
        let mut clause: Vec<Lit> = lits.to_vec();
        clause.sort();
        clause.dedup();
        let mut kept = Vec::with_capacity(clause.len());
        for (i, &lit) in clause.iter().enumerate() {
            if i + 1 < clause.len() && clause[i + 1] == !lit {
                return true;
            }
            match self.value(lit) {
                TRUE => return true,
                FALSE => {}
                _ => kept.push(lit),
            }
        }
        self.original_clauses += 1;
        match kept.len() {
            0 => {
                self.ok = false;
                false
            }
            1 => {
                self.enqueue(kept[0], None);
                if self.propagate().is_some() {
                    self.ok = false;
                }
                self.ok
            }
            _ => {
                self.attach(kept, false);
                true
            }
        }
    }

    fn attach(&mut self, lits: Vec<Lit>, learnt: bool) -> u32 {
        let cref = self.clauses.len() as u32;
        self.watches[lits[0].code()].push(Watcher { clause: cref, blocker: lits[1] });
        self.watches[lits[1].code()].push(Watcher { clause: cref, blocker: lits[0] });
        self.clauses.push(Clause { lits, learnt, deleted: false, activity: 0.0 });
        if learnt {
            self.learnts.push(cref);
        }
        cref
    }

    fn enqueue(&mut self, lit: Lit, reason: Option<u32>) {
        let v = lit.var().index();
        self.assigns[v] = if lit.is_negated() { FALSE } else { TRUE };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(lit);
    }

    /// Unit propagation. Returns a conflicting clause if one is found.
    fn propagate(&mut self) -> Option<u32> {
        let mut conflict = None;
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            self.stats.propagations += 1;
            let false_lit = !p;
            let mut watchers = core::mem::take(&mut self.watches[false_lit.code()]);
            let mut i = 0;
            let mut j = 0;
            while i < watchers.len() {
                let w = watchers[i];
                i += 1;
                let cref = w.clause as usize;
                if self.clauses[cref].deleted {
                    continue;
                }
                if self.value(w.blocker) == TRUE {
                    watchers[j] = w;
                    j += 1;
                    continue;
                }
                {
                    let lits = &mut self.clauses[cref].lits;
                    if lits[0] == false_lit {
                        lits.swap(0, 1);
                    }
                }
                let first = self.clauses[cref].lits[0];
                if first != w.blocker && self.value(first) == TRUE {
                    watchers[j] = Watcher { clause: w.clause, blocker: first };
                    j += 1;
                    continue;
                }
                let len = self.clauses[cref].lits.len();
                let mut moved = false;
                for k in 2..len {
                    let lit = self.clauses[cref].lits[k];
                    if self.value(lit) != FALSE {
                        self.clauses[cref].lits.swap(1, k);
                        self.watches[lit.code()].push(Watcher { clause: w.clause, blocker: first });
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                watchers[j] = Watcher { clause: w.clause, blocker: first };
                j += 1;
                if self.value(first) == FALSE {
                    conflict = Some(w.clause);
                    self.qhead = self.trail.len();
                    while i < watchers.len() {
                        watchers[j] = watchers[i];
                        i += 1;
                        j += 1;
                    }
                } else {
                    self.enqueue(first, Some(w.clause));
                }
            }
            watchers.truncate(j);
            self.watches[false_lit.code()] = watchers;
            if conflict.is_some() {
                break;
            }
        }
        conflict
    }

    fn bump_var(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
        self.heap.bumped(v as u32, &self.activity);
    }

    fn bump_clause(&mut self, cref: usize) {
        if !self.clauses[cref].learnt {
            return;
        }
        self.clauses[cref].activity += self.clause_inc;
        if self.clauses[cref].activity > 1e20 {
            for &l in &self.learnts {
                self.clauses[l as usize].activity *= 1e-20;
            }
            self.clause_inc *= 1e-20;
        }
    }

    /// First-UIP conflict analysis: learnt clause (asserting literal first)
    /// and backjump level.
    fn analyze(&mut self, mut conflict: u32) -> (Vec<Lit>, u32) {
        let mut learnt = vec![Lit(0)];
        let mut pending = 0usize;
        let mut p: Option<Lit> = None;
        let mut index = self.trail.len();
        loop {
            let cref = conflict as usize;
            self.bump_clause(cref);
            let start = usize::from(p.is_some());
            for k in start..self.clauses[cref].lits.len() {
                let q = self.clauses[cref].lits[k];
                let v = q.var().index();
                if !self.seen[v] && self.level[v] > 0 {
                    self.seen[v] = true;
                    self.bump_var(v);
                    if self.level[v] >= self.decision_level() {
                        pending += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                index -= 1;
                if self.seen[self.trail[index].var().index()] {
                    break;
                }
            }
            let lit = self.trail[index];
            p = Some(lit);
            self.seen[lit.var().index()] = false;
            pending -= 1;
            if pending == 0 {
                break;
            }
            conflict = self.reason[lit.var().index()].expect("implied literal without reason");
        }
        learnt[0] = !p.unwrap();

        // Drop literals implied by other literals of the clause.
        let marked: Vec<Lit> = learnt.clone();
        let mut minimized = vec![learnt[0]];
        for &q in &learnt[1..] {
            let v = q.var().index();
            let redundant = match self.reason[v] {
                None => false,
                Some(r) => self.clauses[r as usize].lits[1..].iter().all(|&x| {
                    let xv = x.var().index();
                    self.seen[xv] || self.level[xv] == 0
                }),
            };
            if !redundant {
                minimized.push(q);
            }
        }
        for q in marked {
            self.seen[q.var().index()] = false;
        }
        let learnt = minimized;

        let mut backjump = 0;
        let mut learnt = learnt;
        if learnt.len() > 1 {
            let mut max_i = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var().index()] > self.level[learnt[max_i].var().index()] {
                    max_i = i;
                }
            }
            learnt.swap(1, max_i);
            backjump = self.level[learnt[1].var().index()];
        }
        (learnt, backjump)
    }

    /// Negated assumptions that, with the clauses, entail `p` (which is true).
    fn analyze_final(&mut self, p: Lit) -> Vec<Lit> {
        let mut out = vec![p];
        if self.decision_level() == 0 {
            return out;
        }
        self.seen[p.var().index()] = true;
        for i in (self.trail_lim[0]..self.trail.len()).rev() {
            let lit = self.trail[i];
            let v = lit.var().index();
            if !self.seen[v] {
                continue;
            }
            match self.reason[v] {
                None => {
                    debug_assert!(self.level[v] > 0);
                    out.push(!lit);
                }
                Some(r) => {
                    for k in 1..self.clauses[r as usize].lits.len() {
                        let q = self.clauses[r as usize].lits[k];
                        if self.level[q.var().index()] > 0 {
                            self.seen[q.var().index()] = true;
                        }
                    }
                }
            }
            self.seen[v] = false;
        }
        self.seen[p.var().index()] = false;
        out
    }

    fn cancel_until(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let start = self.trail_lim[level as usize];
        for i in (start..self.trail.len()).rev() {
            let lit = self.trail[i];
            let v = lit.var().index();
            self.assigns[v] = UNDEF;
            self.reason[v] = None;
            self.polarity[v] = !lit.is_negated();
            self.heap.insert(v as u32, &self.activity);
        }
        self.trail.truncate(start);
        self.trail_lim.truncate(level as usize);
        self.qhead = self.trail.len();
    }

    fn pick_branch(&mut self) -> Option<Lit> {
        while let Some(v) = self.heap.pop(&self.activity) {
            if self.assigns[v as usize] == UNDEF {
                return Some(Lit::new(Var(v), !self.polarity[v as usize]));
            }
        }
        None
    }

    fn reduce_db(&mut self) {
        let mut candidates: Vec<u32> = self
            .learnts
            .iter()
            .copied()
            .filter(|&c| {
                let clause = &self.clauses[c as usize];
                let first = clause.lits[0];
                let locked = self.reason[first.var().index()] == Some(c) && self.value(first) == TRUE;
                clause.lits.len() > 2 && !locked
            })
            .collect();
        candidates.sort_by(|&a, &b| {
            self.clauses[a as usize]
                .activity
                .partial_cmp(&self.clauses[b as usize].activity)
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(a.cmp(&b))
        });
        for &c in &candidates[..candidates.len() / 2] {
            let clause = &mut self.clauses[c as usize];
            clause.deleted = true;
            clause.lits = Vec::new();
        }
        let clauses = &self.clauses;
        self.learnts.retain(|&c| !clauses[c as usize].deleted);
    }

    pub fn solve(&mut self) -> Result<SolveResult, BudgetExceeded> {
        self.solve_with(&[])
    }

    /// Solves under `assumptions`. On `Unsat`, [`Solver::failed_assumptions`]
    /// holds a subset of the assumptions that is already contradictory.
    pub fn solve_with(&mut self, assumptions: &[Lit]) -> Result<SolveResult, BudgetExceeded> {
        self.failed.clear();
        self.model.clear();
        if !self.ok {
            return Ok(SolveResult::Unsat);
        }
        if self.max_learnts == 0.0 {
            self.max_learnts = (self.original_clauses as f64 / 3.0).max(2000.0);
        }
        let budget = self.options.conflict_budget;
        let mut conflicts_here = 0u64;
        let mut restart_round = 0u64;
        let result = 'search: loop {
            let limit = (luby(2.0, restart_round) * 100.0) as u64;
            let mut conflicts_in_round = 0u64;
            loop {
                if let Some(conflict) = self.propagate() {
                    self.stats.conflicts += 1;
                    conflicts_here += 1;
                    conflicts_in_round += 1;
                    if self.decision_level() == 0 {
                        self.ok = false;
                        break 'search Ok(SolveResult::Unsat);
                    }
                    let (learnt, backjump) = self.analyze(conflict);
                    self.cancel_until(backjump);
                    if learnt.len() == 1 {
                        self.enqueue(learnt[0], None);
                    } else {
                        let first = learnt[0];
                        let cref = self.attach(learnt, true);
                        self.bump_clause(cref as usize);
                        self.enqueue(first, Some(cref));
                    }
                    self.var_inc /= 0.95;
                    self.clause_inc /= 0.999;
                    if let Some(b) = budget {
                        if conflicts_here > b {
                            break 'search Err(BudgetExceeded { budget: b });
                        }
                    }
                    continue;
                }
                if conflicts_in_round >= limit {
                    self.stats.restarts += 1;
                    restart_round += 1;
                    self.cancel_until(0);
                    continue 'search;
                }
                if self.learnts.len() as f64 - self.trail.len() as f64 >= self.max_learnts {
                    self.reduce_db();
                    self.max_learnts *= 1.1;
                }
                let mut next = None;
                while (self.decision_level() as usize) < assumptions.len() {
                    let p = assumptions[self.decision_level() as usize];
                    match self.value(p) {
                        TRUE => self.trail_lim.push(self.trail.len()),
                        FALSE => {
                            let conflict = self.analyze_final(!p);
                            self.failed = conflict.into_iter().map(|l| !l).collect();
                            break 'search Ok(SolveResult::Unsat);
                        }
                        _ => {
                            next = Some(p);
                            break;
                        }
                    }
                }
                let decision = match next {
                    Some(p) => p,
                    None => match self.pick_branch() {
                        Some(p) => {
                            self.stats.decisions += 1;
                            p
                        }
                        None => {
                            self.model = self.assigns.iter().map(|&v| v == TRUE).collect();
                            break 'search Ok(SolveResult::Sat);
                        }
                    },
                };
                self.trail_lim.push(self.trail.len());
                self.enqueue(decision, None);
            }
        };
        self.cancel_until(0);
        result
    }

    /// Value of `var` in the last model found.
    pub fn model_value(&self, var: Var) -> bool {
        self.model.get(var.index()).copied().unwrap_or(false)
    }

    pub fn model(&self) -> &[bool] {
        &self.model
    }

    /// After an `Unsat` answer under assumptions: a contradictory subset of
    /// them (empty when the clauses alone are unsatisfiable).
    pub fn failed_assumptions(&self) -> &[Lit] {
        &self.failed
    }
}
