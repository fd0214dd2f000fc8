//! Propositional encoding of a grounded KB over a finite domain.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::Domain;
use crate::sat::{Lit, SatOptions, Solver, Var};
use crate::translate::{GroundConcept, GroundFact, GroundKb, GroundName};

/// A TBox-level ground axiom, used to attribute conflicts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomRef {
    /// Inclusion `source` (index into [`GroundKb::sources`]) grounded at `time`.
    Gci { source: usize, time: u32 },
    Functional { role: String, inverse: bool, time: u32 },
    RoleInclusion { role: String, from: u32, to: u32 },
}

/// Clauses plus the literals needed to drive them.
#[derive(Clone, Debug, Default)]
pub struct ClauseSet {
    pub num_vars: u32,
    pub clauses: Vec<Vec<Lit>>,
    /// One selector per ground ABox entry; the entry holds when it is true.
    pub selectors: Vec<Lit>,
    /// The literal each ground ABox entry asserts.
    pub assertion_lits: Vec<Lit>,
    /// Guard literals of TBox axioms (tracked encodings only).
    pub axiom_selectors: Vec<(AxiomRef, Lit)>,
}

impl ClauseSet {
    pub fn to_solver(&self, options: SatOptions) -> Solver {
        let mut solver = Solver::new(options);
        for _ in 0..self.num_vars {
            solver.new_var();
        }
        for c in &self.clauses {
            if !solver.add_clause(c) {
                break;
            }
        }
        solver
    }
}

/// Encodes `gkb` over `domain`: every grounded inclusion for every element,
/// role inclusions and functionality over all element pairs, and each ABox
/// entry as `selector -> literal`.
pub fn ground_to_propositional(gkb: &GroundKb, domain: &Domain) -> ClauseSet {
    Encoder::new(domain, false).run(gkb)
}

/// As [`ground_to_propositional`], with every TBox axiom guarded by its own
/// selector so that conflicts can be attributed to axioms.
pub fn ground_to_propositional_tracked(gkb: &GroundKb, domain: &Domain) -> ClauseSet {
    Encoder::new(domain, true).run(gkb)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Node {
    Top,
    Bottom,
    Atom(u32),
    Exists(u32, bool),
    Not(u32),
    And(u32, u32),
    Or(u32, u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Enc {
    Const(bool),
    Lit(Lit),
}

impl Enc {
    fn negate(self) -> Enc {
        match self {
            Enc::Const(b) => Enc::Const(!b),
            Enc::Lit(l) => Enc::Lit(!l),
        }
    }
}

const PAIRWISE_LIMIT: usize = 6;

struct Encoder<'a> {
    domain: &'a Domain,
    tracked: bool,
    out: ClauseSet,
    concept_ids: BTreeMap<GroundName, u32>,
    role_ids: BTreeMap<GroundName, u32>,
    concept_vars: Vec<Vec<Option<Var>>>,
    role_vars: Vec<Vec<Option<Var>>>,
    nodes: BTreeMap<Node, u32>,
    node_list: Vec<Node>,
    memo: BTreeMap<(u32, u32), Enc>,
}

impl<'a> Encoder<'a> {
    fn new(domain: &'a Domain, tracked: bool) -> Self {
        Encoder {
            domain,
            tracked,
            out: ClauseSet::default(),
            concept_ids: BTreeMap::new(),
            role_ids: BTreeMap::new(),
            concept_vars: Vec::new(),
            role_vars: Vec::new(),
            nodes: BTreeMap::new(),
            node_list: Vec::new(),
            memo: BTreeMap::new(),
        }
    }

    fn fresh(&mut self) -> Var {
        let v = Var(self.out.num_vars);
        self.out.num_vars += 1;
        v
    }

    fn clause(&mut self, guard: Option<Lit>, mut lits: Vec<Lit>) {
        if let Some(g) = guard {
            lits.push(!g);
        }
        self.out.clauses.push(lits);
    }

    fn guard(&mut self, axiom: AxiomRef) -> Option<Lit> {
        if !self.tracked {
            return None;
        }
        let s = self.fresh().positive();
        self.out.axiom_selectors.push((axiom, s));
        Some(s)
    }

    fn concept_var(&mut self, name: &GroundName, d: usize) -> Lit {
        let n = self.domain.len();
        let next = self.concept_ids.len() as u32;
        let id = *self.concept_ids.entry(name.clone()).or_insert(next) as usize;
        if id == self.concept_vars.len() {
            self.concept_vars.push(vec![None; n]);
        }
        if let Some(v) = self.concept_vars[id][d] {
            return v.positive();
        }
        let v = self.fresh();
        self.concept_vars[id][d] = Some(v);
        v.positive()
    }

    fn role_id(&mut self, name: &GroundName) -> u32 {
        let n = self.domain.len();
        let next = self.role_ids.len() as u32;
        let id = *self.role_ids.entry(name.clone()).or_insert(next);
        if id as usize == self.role_vars.len() {
            self.role_vars.push(vec![None; n * n]);
        }
        id
    }

    fn role_var(&mut self, id: u32, d: usize, e: usize) -> Lit {
        let n = self.domain.len();
        if let Some(v) = self.role_vars[id as usize][d * n + e] {
            return v.positive();
        }
        let v = self.fresh();
        self.role_vars[id as usize][d * n + e] = Some(v);
        v.positive()
    }

    fn intern(&mut self, c: &GroundConcept) -> u32 {
        let node = match c {
            GroundConcept::Top => Node::Top,
            GroundConcept::Bottom => Node::Bottom,
            GroundConcept::Atomic(name) => {
                let next = self.concept_ids.len() as u32;
                let id = *self.concept_ids.entry(name.clone()).or_insert(next);
                if id as usize == self.concept_vars.len() {
                    self.concept_vars.push(vec![None; self.domain.len()]);
                }
                Node::Atom(id)
            }
            GroundConcept::Exists(role) => Node::Exists(self.role_id(&role.name), role.inverse),
            GroundConcept::Not(inner) => Node::Not(self.intern(inner)),
            GroundConcept::And(a, b) => Node::And(self.intern(a), self.intern(b)),
            GroundConcept::Or(a, b) => Node::Or(self.intern(a), self.intern(b)),
        };
        if let Some(&id) = self.nodes.get(&node) {
            return id;
        }
        let id = self.node_list.len() as u32;
        self.node_list.push(node);
        self.nodes.insert(node, id);
        id
    }

    fn encode(&mut self, node: u32, d: usize) -> Enc {
        if let Some(&e) = self.memo.get(&(node, d as u32)) {
            return e;
        }
        let result = match self.node_list[node as usize] {
            Node::Top => Enc::Const(true),
            Node::Bottom => Enc::Const(false),
            Node::Atom(id) => {
                let v = match self.concept_vars[id as usize][d] {
                    Some(v) => v,
                    None => {
                        let v = self.fresh();
                        self.concept_vars[id as usize][d] = Some(v);
                        v
                    }
                };
                Enc::Lit(v.positive())
            }
            Node::Exists(role, inverse) => {
                let fillers: Vec<Lit> = (0..self.domain.len())
                    .map(|e| if inverse { self.role_var(role, e, d) } else { self.role_var(role, d, e) })
                    .collect();
                self.define_or(&fillers)
            }
            Node::Not(inner) => self.encode(inner, d).negate(),
            Node::And(a, b) => {
                let x = self.encode(a, d);
                let y = self.encode(b, d);
                match (x, y) {
                    (Enc::Const(false), _) | (_, Enc::Const(false)) => Enc::Const(false),
                    (Enc::Const(true), other) | (other, Enc::Const(true)) => other,
                    (Enc::Lit(p), Enc::Lit(q)) if p == q => Enc::Lit(p),
                    (Enc::Lit(p), Enc::Lit(q)) if p == !q => Enc::Const(false),
                    (Enc::Lit(p), Enc::Lit(q)) => self.define_or(&[!p, !q]).negate(),
                }
            }
            Node::Or(a, b) => {
                let x = self.encode(a, d);
                let y = self.encode(b, d);
                match (x, y) {
                    (Enc::Const(true), _) | (_, Enc::Const(true)) => Enc::Const(true),
                    (Enc::Const(false), other) | (other, Enc::Const(false)) => other,
                    (Enc::Lit(p), Enc::Lit(q)) if p == q => Enc::Lit(p),
                    (Enc::Lit(p), Enc::Lit(q)) if p == !q => Enc::Const(true),
                    (Enc::Lit(p), Enc::Lit(q)) => self.define_or(&[p, q]),
                }
            }
        };
        self.memo.insert((node, d as u32), result);
        result
    }

    /// A literal equivalent to the disjunction of `lits`.
    fn define_or(&mut self, lits: &[Lit]) -> Enc {
        match lits {
            [] => Enc::Const(false),
            [single] => Enc::Lit(*single),
            _ => {
                let x = self.fresh().positive();
                let mut long = Vec::with_capacity(lits.len() + 1);
                long.push(!x);
                long.extend_from_slice(lits);
                self.out.clauses.push(long);
                for &l in lits {
                    self.out.clauses.push(vec![!l, x]);
                }
                Enc::Lit(x)
            }
        }
    }

    fn at_most_one(&mut self, guard: Option<Lit>, lits: &[Lit]) {
        if lits.len() <= PAIRWISE_LIMIT {
            for i in 0..lits.len() {
                for j in i + 1..lits.len() {
                    self.clause(guard, vec![!lits[i], !lits[j]]);
                }
            }
            return;
        }
        // Sequential counter: s[i] means "some of lits[..=i] is true".
        let s: Vec<Lit> = (0..lits.len() - 1).map(|_| self.fresh().positive()).collect();
        self.clause(guard, vec![!lits[0], s[0]]);
        for i in 1..lits.len() - 1 {
            self.clause(guard, vec![!lits[i], s[i]]);
            self.clause(guard, vec![!s[i - 1], s[i]]);
            self.clause(guard, vec![!lits[i], !s[i - 1]]);
        }
        self.clause(guard, vec![!lits[lits.len() - 1], !s[lits.len() - 2]]);
    }

    fn run(mut self, gkb: &GroundKb) -> ClauseSet {
        let n = self.domain.len();
        for gci in &gkb.gcis {
            let guard = self.guard(AxiomRef::Gci { source: gci.source, time: gci.time });
            let lhs = self.intern(&gci.lhs);
            let rhs = self.intern(&gci.rhs);
            for d in 0..n {
                let l = self.encode(lhs, d);
                if l == Enc::Const(false) {
                    continue;
                }
                let r = self.encode(rhs, d);
                match (l, r) {
                    (_, Enc::Const(true)) => {}
                    (Enc::Lit(p), Enc::Lit(q)) if p == q => {}
                    (Enc::Const(true), Enc::Const(false)) => self.clause(guard, Vec::new()),
                    (Enc::Const(true), Enc::Lit(q)) => self.clause(guard, vec![q]),
                    (Enc::Lit(p), Enc::Const(false)) => self.clause(guard, vec![!p]),
                    (Enc::Lit(p), Enc::Lit(q)) => self.clause(guard, vec![!p, q]),
                    (Enc::Const(false), _) => unreachable!(),
                }
            }
        }
        for inc in &gkb.role_inclusions {
            if inc.from == inc.to {
                continue;
            }
            let guard = self.guard(AxiomRef::RoleInclusion { role: inc.role.clone(), from: inc.from, to: inc.to });
            let sub = self.role_id(&inc.sub());
            let sup = self.role_id(&inc.sup());
            for d in 0..n {
                for e in 0..n {
                    let p = self.role_var(sub, d, e);
                    let q = self.role_var(sup, d, e);
                    self.clause(guard, vec![!p, q]);
                }
            }
        }
        for f in &gkb.functionality {
            let guard = self.guard(AxiomRef::Functional {
                role: f.name.base.clone(),
                inverse: f.inverse,
                time: f.name.index,
            });
            let id = self.role_id(&f.name);
            for d in 0..n {
                let fillers: Vec<Lit> = (0..n)
                    .map(|e| if f.inverse { self.role_var(id, e, d) } else { self.role_var(id, d, e) })
                    .collect();
                self.at_most_one(guard, &fillers);
            }
        }
        for a in &gkb.abox {
            let lit = match &a.fact {
                GroundFact::Concept { concept, individual } => {
                    let d = self.element(individual);
                    self.concept_var(concept, d)
                }
                GroundFact::Role { role, subject, object } => {
                    let (d, e) = (self.element(subject), self.element(object));
                    let id = self.role_id(role);
                    self.role_var(id, d, e)
                }
            };
            let lit = if a.negated { !lit } else { lit };
            let s = self.fresh().positive();
            self.out.clauses.push(vec![!s, lit]);
            self.out.selectors.push(s);
            self.out.assertion_lits.push(lit);
        }
        self.out
    }

    fn element(&self, individual: &str) -> usize {
        self.domain
            .index_of(individual)
            .unwrap_or_else(|| panic!("individual `{individual}` missing from the domain"))
    }
}
