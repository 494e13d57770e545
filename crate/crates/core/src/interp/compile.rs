//! Lowering of formulas to an arena of nodes over numbered variable slots.
//!
//! Every binder gets its own slot, so shadowed names never collide and
//! existential blocks can be merged freely when planning.

use std::collections::{BTreeSet, HashMap};

use crate::field::FieldOps;
use crate::lang::{Formula, Term, TermKind, Var};

use super::structure::Structure;
use super::EvalError;

pub(crate) type NodeId = usize;

#[derive(Debug, Clone, Copy)]
pub(crate) enum Instr {
    Const(u32),
    Slot(u32),
    Add(u32, u32),
    Mul(u32, u32),
    Bar(u32),
}

/// A straight-line program computing both sides of one equation.
#[derive(Debug, Clone)]
pub(crate) struct Atom {
    pub code: Vec<Instr>,
    pub lhs: u32,
    pub rhs: u32,
    pub source: (Term, Term),
}

#[derive(Debug, Clone)]
pub(crate) enum Node {
    Const(bool),
    Atom(usize),
    Not(NodeId),
    And(Vec<NodeId>),
    Or(Vec<NodeId>),
    Implies(NodeId, NodeId),
    Iff(NodeId, NodeId),
    Quant(Box<Quant>),
}

#[derive(Debug, Clone)]
pub(crate) struct Quant {
    pub exists: bool,
    pub slots: Vec<u32>,
    pub body: NodeId,
    pub plan: Plan,
}

/// A conjunct of a planned block: node and required truth value.
pub(crate) type Lit = (NodeId, bool);

#[derive(Debug, Clone)]
pub(crate) enum Stage {
    Check(Vec<usize>),
    /// Positive equations that are affine in `slots` once earlier stages are
    /// bound; solved over the prime field.
    Solve { slots: Vec<u32>, lits: Vec<usize> },
    Enumerate(u32),
}

/// Staged evaluation of `∃ slots (lit ∧ lit ∧ …)`.
#[derive(Debug, Clone, Default)]
pub(crate) struct Plan {
    pub lits: Vec<Lit>,
    pub stages: Vec<Stage>,
    /// Slots that occur in no literal; each contributes a factor `|F|` when
    /// counting.
    pub dropped: u32,
}

/// How a guided block binds a group of variables.
#[derive(Debug, Clone, PartialEq)]
pub enum HintKind {
    /// Solution space of a linear system, enumerated over its basis span.
    LinearSolve,
    /// Plain enumeration of the domain.
    Enumerate,
}

/// One restricted enumeration used by the guided strategy, with the
/// equations whose solution set it must equal.
#[derive(Debug, Clone)]
pub struct QuantHint {
    pub vars: Vec<Var>,
    pub kind: HintKind,
    pub guard: Vec<Formula>,
}

/// A formula compiled against a structure with a fixed order of free
/// variables.
#[derive(Debug)]
pub struct Compiled<'s> {
    pub(crate) structure: &'s Structure,
    pub(crate) nodes: Vec<Node>,
    pub(crate) cost: Vec<f64>,
    pub(crate) atoms: Vec<Atom>,
    pub(crate) root: NodeId,
    pub(crate) slot_vars: Vec<Var>,
    pub(crate) free: Vec<Var>,
    pub(crate) max_regs: usize,
    /// Plan over the trailing free variables, for counting.
    pub(crate) point_plan: Option<(Vec<u32>, Plan)>,
}

struct Builder<'s> {
    s: &'s Structure,
    nodes: Vec<Node>,
    node_slots: Vec<Vec<u32>>,
    cost: Vec<f64>,
    atoms: Vec<Atom>,
    slot_vars: Vec<Var>,
    scope: HashMap<Var, Vec<u32>>,
    max_regs: usize,
}

impl<'s> Compiled<'s> {
    /// Compiles `f` with `free` bound, in order, to the first slots.
    pub fn new(s: &'s Structure, f: &Formula, free: &[Var]) -> Result<Compiled<'s>, EvalError> {
        Compiled::build(s, f, free, 0, false)
    }

    /// As [`Compiled::new`], additionally planning a block over the last
    /// `point_arity` free variables so that the formula can be counted or
    /// enumerated as a set. With `keep_all`, unconstrained variables are
    /// enumerated rather than dropped.
    pub fn for_points(
        s: &'s Structure,
        f: &Formula,
        free: &[Var],
        point_arity: usize,
        keep_all: bool,
    ) -> Result<Compiled<'s>, EvalError> {
        Compiled::build(s, f, free, point_arity, keep_all)
    }

    fn build(
        s: &'s Structure,
        f: &Formula,
        free: &[Var],
        point_arity: usize,
        keep_all: bool,
    ) -> Result<Compiled<'s>, EvalError> {
        let mut b = Builder {
            s,
            nodes: Vec::new(),
            node_slots: Vec::new(),
            cost: Vec::new(),
            atoms: Vec::new(),
            slot_vars: Vec::new(),
            scope: HashMap::new(),
            max_regs: 0,
        };
        for v in free {
            if b.scope.contains_key(v) {
                return Err(EvalError::DuplicateVariable(v.clone()));
            }
            let slot = b.new_slot(v);
            b.scope.insert(v.clone(), vec![slot]);
        }
        let root = b.formula(f)?;
        let point_plan = if point_arity > 0 {
            let slots: Vec<u32> = ((free.len() - point_arity) as u32..free.len() as u32).collect();
            let plan = b.plan(&slots, root, true, true, keep_all);
            Some((slots, plan))
        } else {
            None
        };
        Ok(Compiled {
            structure: s,
            nodes: b.nodes,
            cost: b.cost,
            atoms: b.atoms,
            root,
            slot_vars: b.slot_vars,
            free: free.to_vec(),
            max_regs: b.max_regs,
            point_plan,
        })
    }

    pub fn structure(&self) -> &Structure {
        self.structure
    }

    pub fn free_vars(&self) -> &[Var] {
        &self.free
    }

    pub fn slot_count(&self) -> usize {
        self.slot_vars.len()
    }

    /// Estimated number of atom evaluations of the naive strategy.
    pub fn naive_cost(&self) -> f64 {
        self.cost[self.root]
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// All restricted enumerations the guided strategy may perform.
    pub fn hints(&self) -> Vec<QuantHint> {
        let mut plans: Vec<&Plan> = self
            .nodes
            .iter()
            .filter_map(|n| match n {
                Node::Quant(q) => Some(&q.plan),
                _ => None,
            })
            .collect();
        if let Some((_, p)) = &self.point_plan {
            plans.push(p);
        }
        let mut out = Vec::new();
        for plan in plans {
            for st in &plan.stages {
                match st {
                    Stage::Solve { slots, lits } => out.push(QuantHint {
                        vars: slots.iter().map(|&s| self.slot_vars[s as usize].clone()).collect(),
                        kind: HintKind::LinearSolve,
                        guard: lits
                            .iter()
                            .map(|&i| match &self.nodes[plan.lits[i].0] {
                                Node::Atom(a) => {
                                    let (l, r) = &self.atoms[*a].source;
                                    Formula::eq(l, r)
                                }
                                _ => unreachable!("solve literals are atoms"),
                            })
                            .collect(),
                    }),
                    Stage::Enumerate(s) => out.push(QuantHint {
                        vars: vec![self.slot_vars[*s as usize].clone()],
                        kind: HintKind::Enumerate,
                        guard: Vec::new(),
                    }),
                    Stage::Check(_) => {}
                }
            }
        }
        out
    }
}

impl<'s> Builder<'s> {
    fn new_slot(&mut self, v: &Var) -> u32 {
        self.slot_vars.push(v.clone());
        (self.slot_vars.len() - 1) as u32
    }

    fn push(&mut self, node: Node, slots: Vec<u32>, cost: f64) -> NodeId {
        self.nodes.push(node);
        self.node_slots.push(slots);
        self.cost.push(cost);
        self.nodes.len() - 1
    }

    fn union(&self, kids: &[NodeId]) -> Vec<u32> {
        let mut set = BTreeSet::new();
        for &k in kids {
            set.extend(self.node_slots[k].iter().copied());
        }
        set.into_iter().collect()
    }

    fn composite(&mut self, node: Node, kids: &[NodeId]) -> NodeId {
        let slots = self.union(kids);
        let cost = kids.iter().map(|&k| self.cost[k]).sum();
        self.push(node, slots, cost)
    }

    fn formula(&mut self, f: &Formula) -> Result<NodeId, EvalError> {
        Ok(match f {
            Formula::True => self.push(Node::Const(true), vec![], 1.0),
            Formula::False => self.push(Node::Const(false), vec![], 1.0),
            Formula::Eq(a, b) => self.atom(a, b)?,
            Formula::Not(a) => {
                let a = self.formula(a)?;
                self.composite(Node::Not(a), &[a])
            }
            Formula::And(a, b) => {
                let kids = vec![self.formula(a)?, self.formula(b)?];
                self.composite(Node::And(kids.clone()), &kids)
            }
            Formula::Or(a, b) => {
                let kids = vec![self.formula(a)?, self.formula(b)?];
                self.composite(Node::Or(kids.clone()), &kids)
            }
            Formula::BigAnd(v) => {
                let kids = v.iter().map(|g| self.formula(g)).collect::<Result<Vec<_>, _>>()?;
                self.composite(Node::And(kids.clone()), &kids)
            }
            Formula::BigOr(v) => {
                let kids = v.iter().map(|g| self.formula(g)).collect::<Result<Vec<_>, _>>()?;
                self.composite(Node::Or(kids.clone()), &kids)
            }
            Formula::Implies(a, b) => {
                let (a, b) = (self.formula(a)?, self.formula(b)?);
                self.composite(Node::Implies(a, b), &[a, b])
            }
            Formula::Iff(a, b) => {
                let (a, b) = (self.formula(a)?, self.formula(b)?);
                self.composite(Node::Iff(a, b), &[a, b])
            }
            Formula::Exists(..) | Formula::Forall(..) => self.quantifier(f)?,
        })
    }

    /// Collapses a run of like quantifiers into one node.
    fn quantifier(&mut self, f: &Formula) -> Result<NodeId, EvalError> {
        let exists = matches!(f, Formula::Exists(..));
        let mut vars = Vec::new();
        let mut cur = f;
        loop {
            match (cur, exists) {
                (Formula::Exists(v, body), true) | (Formula::Forall(v, body), false) => {
                    vars.push(v.clone());
                    cur = body;
                }
                _ => break,
            }
        }
        let mut slots = Vec::new();
        for v in &vars {
            let s = self.new_slot(v);
            self.scope.entry(v.clone()).or_default().push(s);
            slots.push(s);
        }
        let body = self.formula(cur);
        for v in &vars {
            self.scope.get_mut(v).unwrap().pop();
        }
        let body = body?;
        let free: Vec<u32> = self.node_slots[body]
            .iter()
            .copied()
            .filter(|s| !slots.contains(s))
            .collect();
        let cost = (self.s.size() as f64).powi(slots.len() as i32) * self.cost[body];
        let plan = self.plan(&slots, body, exists, false, false);
        Ok(self.push(
            Node::Quant(Box::new(Quant {
                exists,
                slots,
                body,
                plan,
            })),
            free,
            cost,
        ))
    }

    fn atom(&mut self, a: &Term, b: &Term) -> Result<NodeId, EvalError> {
        if a == b {
            return Ok(self.push(Node::Const(true), vec![], 1.0));
        }
        let mut code = Vec::new();
        let mut regs: HashMap<u64, u32> = HashMap::new();
        let mut consts: HashMap<u32, u32> = HashMap::new();
        let mut slots = BTreeSet::new();
        let mut err = None;
        for t in [a, b] {
            t.visit(&mut |n| {
                if err.is_some() || regs.contains_key(&n.id()) {
                    return;
                }
                let instr = match self.term_instr(n, &regs, &consts) {
                    Ok(i) => i,
                    Err(e) => {
                        err = Some(e);
                        return;
                    }
                };
                match instr {
                    Instr::Slot(s) => {
                        slots.insert(s);
                    }
                    Instr::Const(c) => {
                        consts.insert(code.len() as u32, c);
                    }
                    _ => {}
                }
                regs.insert(n.id(), code.len() as u32);
                code.push(instr);
            });
        }
        if let Some(e) = err {
            return Err(e);
        }
        self.max_regs = self.max_regs.max(code.len());
        let atom = Atom {
            lhs: regs[&a.id()],
            rhs: regs[&b.id()],
            code,
            source: (a.clone(), b.clone()),
        };
        self.atoms.push(atom);
        let id = self.atoms.len() - 1;
        Ok(self.push(Node::Atom(id), slots.into_iter().collect(), 1.0))
    }

    /// Instruction for one term node, folding constant operands.
    fn term_instr(&self, n: &Term, regs: &HashMap<u64, u32>, consts: &HashMap<u32, u32>) -> Result<Instr, EvalError> {
        let s = self.s;
        let konst = |t: &Term| consts.get(&regs[&t.id()]).copied();
        Ok(match n.kind() {
            TermKind::Var(v) => match self.scope.get(v).and_then(|st| st.last()) {
                Some(&slot) => Instr::Slot(slot),
                None => return Err(EvalError::Unbound(v.clone())),
            },
            TermKind::Zero => Instr::Const(0),
            TermKind::One => Instr::Const(1),
            TermKind::Int(k) => Instr::Const(s.from_int(k)),
            TermKind::Rat(r) => Instr::Const(s.from_rat(r).ok_or_else(|| EvalError::Denominator(r.clone()))?),
            TermKind::Add(x, y) => match (konst(x), konst(y)) {
                (Some(a), Some(b)) => Instr::Const(s.add_e(a, b)),
                _ => Instr::Add(regs[&x.id()], regs[&y.id()]),
            },
            TermKind::Mul(x, y) => match (konst(x), konst(y)) {
                (Some(a), Some(b)) => Instr::Const(s.mul_e(a, b)),
                _ => Instr::Mul(regs[&x.id()], regs[&y.id()]),
            },
            TermKind::Bar(x) => {
                if !s.has_involution() {
                    return Err(EvalError::NoInvolution);
                }
                match konst(x) {
                    Some(a) => Instr::Const(s.bar_e(a)),
                    None => Instr::Bar(regs[&x.id()]),
                }
            }
        })
    }

    /// Flattens the body of a block into literals, hoisting nested
    /// existentials (universals under negation) into the block.
    fn collect(&self, id: NodeId, pos: bool, hoist: bool, lits: &mut Vec<Lit>, slots: &mut Vec<u32>) {
        match (&self.nodes[id], pos) {
            (Node::Const(b), _) if *b == pos => {}
            (Node::And(kids), true) | (Node::Or(kids), false) => {
                for &k in kids {
                    self.collect(k, pos, hoist, lits, slots);
                }
            }
            (Node::Not(a), _) => self.collect(*a, !pos, hoist, lits, slots),
            (Node::Implies(a, b), false) => {
                self.collect(*a, true, hoist, lits, slots);
                self.collect(*b, false, hoist, lits, slots);
            }
            (Node::Quant(q), _) if hoist && q.exists == pos => {
                slots.extend(q.slots.iter().copied());
                self.collect(q.body, pos, hoist, lits, slots);
            }
            _ => lits.push((id, pos)),
        }
    }

    /// Affine degree (0, 1, or 2 meaning "more") of an atom in `free`.
    fn atom_degree(&self, atom: &Atom, free: &BTreeSet<u32>) -> u8 {
        let mut deg = vec![0u8; atom.code.len()];
        for (i, ins) in atom.code.iter().enumerate() {
            deg[i] = match *ins {
                Instr::Const(_) => 0,
                Instr::Slot(s) => free.contains(&s) as u8,
                Instr::Add(a, b) => deg[a as usize].max(deg[b as usize]),
                Instr::Mul(a, b) => (deg[a as usize] + deg[b as usize]).min(2),
                Instr::Bar(a) => deg[a as usize],
            };
        }
        deg[atom.lhs as usize].max(deg[atom.rhs as usize])
    }

    /// Plans `∃ slots body` (or its negation's witness search when
    /// `positive` is false). Point plans must not absorb inner witnesses,
    /// since their solutions are counted.
    fn plan(&self, slots: &[u32], body: NodeId, positive: bool, point_plan: bool, keep_all: bool) -> Plan {
        let mut lits = Vec::new();
        let mut block: Vec<u32> = slots.to_vec();
        self.collect(body, positive, !point_plan, &mut lits, &mut block);
        let lit_slots: Vec<BTreeSet<u32>> = lits.iter().map(|(n, _)| self.node_slots[*n].iter().copied().collect()).collect();
        let mut remaining: BTreeSet<u32> = block.iter().copied().collect();
        let mut pending: Vec<usize> = (0..lits.len()).collect();
        let mut stages = Vec::new();
        let mut dropped = 0;
        loop {
            let (mut ready, rest): (Vec<usize>, Vec<usize>) =
                pending.iter().partition(|&&i| lit_slots[i].is_disjoint(&remaining));
            pending = rest;
            if !ready.is_empty() {
                ready.sort_by(|&a, &b| self.cost[lits[a].0].total_cmp(&self.cost[lits[b].0]));
                stages.push(Stage::Check(ready));
            }
            if remaining.is_empty() {
                break;
            }
            let used: BTreeSet<u32> = pending.iter().flat_map(|&i| lit_slots[i].iter().copied()).collect();
            let unused: Vec<u32> = remaining.iter().copied().filter(|s| !used.contains(s)).collect();
            for s in unused {
                remaining.remove(&s);
                if keep_all {
                    stages.push(Stage::Enumerate(s));
                } else {
                    dropped += 1;
                }
            }
            if remaining.is_empty() {
                continue;
            }
            let solvable = |i: usize| -> bool {
                let (n, pos) = lits[i];
                match (&self.nodes[n], pos) {
                    (Node::Atom(a), true) => {
                        !lit_slots[i].is_disjoint(&remaining) && self.atom_degree(&self.atoms[*a], &remaining) <= 1
                    }
                    _ => false,
                }
            };
            if let Some(first) = pending.iter().copied().find(|&i| solvable(i)) {
                let mut comp = vec![first];
                let mut vars: BTreeSet<u32> = lit_slots[first].intersection(&remaining).copied().collect();
                loop {
                    let next = pending
                        .iter()
                        .copied()
                        .find(|&i| !comp.contains(&i) && solvable(i) && !lit_slots[i].is_disjoint(&vars));
                    match next {
                        Some(i) => {
                            vars.extend(lit_slots[i].intersection(&remaining).copied());
                            comp.push(i);
                        }
                        None => break,
                    }
                }
                pending.retain(|i| !comp.contains(i));
                for v in &vars {
                    remaining.remove(v);
                }
                comp.sort_unstable();
                stages.push(Stage::Solve {
                    slots: block.iter().copied().filter(|s| vars.contains(s)).collect(),
                    lits: comp,
                });
            } else {
                let target = pending
                    .iter()
                    .copied()
                    .min_by_key(|&i| lit_slots[i].intersection(&remaining).count())
                    .expect("pending literals mention remaining slots");
                let s = *block
                    .iter()
                    .find(|s| remaining.contains(s) && lit_slots[target].contains(s))
                    .unwrap();
                remaining.remove(&s);
                stages.push(Stage::Enumerate(s));
            }
        }
        Plan { lits, stages, dropped }
    }
}
