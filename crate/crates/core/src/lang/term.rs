//! Hash-consed terms of the ring language (optionally with involution).
//!
//! Every structurally distinct term is interned exactly once, so equality and
//! hashing are by node identity and shared subterms are stored once.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::var::Var;
use crate::field::FieldOps;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum TermKind {
    Var(Var),
    Zero,
    One,
    /// Integer literal sugar; never 0 or 1 in canonical terms.
    Int(BigInt),
    /// Rational literal sugar with denominator > 1.
    Rat(BigRational),
    Add(Term, Term),
    Mul(Term, Term),
    Bar(Term),
}

struct TermNode {
    id: u64,
    kind: TermKind,
}

#[derive(Clone)]
pub struct Term(Arc<TermNode>);

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.0.id == other.0.id
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.id.hash(state)
    }
}

fn interner() -> &'static Mutex<HashMap<TermKind, Term>> {
    static INTERNER: OnceLock<Mutex<HashMap<TermKind, Term>>> = OnceLock::new();
    INTERNER.get_or_init(|| Mutex::new(HashMap::new()))
}

static NEXT_ID: AtomicU64 = AtomicU64::new(0);

#[derive(Debug, Clone, PartialEq)]
pub enum TermEvalError {
    Unbound(Var),
    /// A rational literal whose denominator is not invertible.
    Denominator(BigRational),
    /// `bar` applied in a structure without involution.
    NoInvolution,
}

impl fmt::Display for TermEvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermEvalError::Unbound(v) => write!(f, "variable {v} is not assigned"),
            TermEvalError::Denominator(r) => {
                write!(f, "literal {r} has a non-invertible denominator")
            }
            TermEvalError::NoInvolution => write!(f, "structure has no involution"),
        }
    }
}

impl std::error::Error for TermEvalError {}

impl Term {
    /// Interns `kind` as-is, without any folding.
    pub fn raw(kind: TermKind) -> Term {
        let mut map = interner().lock().expect("term interner poisoned");
        if let Some(t) = map.get(&kind) {
            return t.clone();
        }
        let t = Term(Arc::new(TermNode {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            kind: kind.clone(),
        }));
        map.insert(kind, t.clone());
        t
    }

    pub fn kind(&self) -> &TermKind {
        &self.0.kind
    }

    pub fn id(&self) -> u64 {
        self.0.id
    }

    pub fn var(v: &Var) -> Term {
        Term::raw(TermKind::Var(v.clone()))
    }

    pub fn zero() -> Term {
        Term::raw(TermKind::Zero)
    }

    pub fn one() -> Term {
        Term::raw(TermKind::One)
    }

    pub fn int(n: i64) -> Term {
        Term::big_int(BigInt::from(n))
    }

    pub fn big_int(n: BigInt) -> Term {
        if n.is_zero() {
            Term::zero()
        } else if n.is_one() {
            Term::one()
        } else {
            Term::raw(TermKind::Int(n))
        }
    }

    pub fn rational(r: BigRational) -> Term {
        if r.is_integer() {
            Term::big_int(r.to_integer())
        } else {
            Term::raw(TermKind::Rat(r))
        }
    }

    pub fn ratio(n: i64, d: i64) -> Term {
        Term::rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// The literal value of a numeric node.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.kind() {
            TermKind::Zero => Some(BigRational::zero()),
            TermKind::One => Some(BigRational::one()),
            TermKind::Int(n) => Some(BigRational::from_integer(n.clone())),
            TermKind::Rat(r) => Some(r.clone()),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.kind(), TermKind::Zero)
    }

    pub fn is_one(&self) -> bool {
        matches!(self.kind(), TermKind::One)
    }

    pub fn is_literal(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Sum with literal folding and `0 + t = t`.
    pub fn add(a: &Term, b: &Term) -> Term {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        if let (Some(x), Some(y)) = (a.as_rational(), b.as_rational()) {
            return Term::rational(x + y);
        }
        Term::raw(TermKind::Add(a.clone(), b.clone()))
    }

    /// Product with literal folding, `0 t = 0` and `1 t = t`.
    pub fn mul(a: &Term, b: &Term) -> Term {
        if a.is_zero() || b.is_zero() {
            return Term::zero();
        }
        if a.is_one() {
            return b.clone();
        }
        if b.is_one() {
            return a.clone();
        }
        match (a.as_rational(), b.as_rational()) {
            (Some(x), Some(y)) => return Term::rational(x * y),
            (Some(x), None) => {
                if let TermKind::Mul(l, r) = b.kind() {
                    if let Some(y) = l.as_rational() {
                        return Term::mul(&Term::rational(x * y), r);
                    }
                }
            }
            (None, Some(_)) => return Term::mul(b, a),
            (None, None) => {}
        }
        Term::raw(TermKind::Mul(a.clone(), b.clone()))
    }

    pub fn bar(a: &Term) -> Term {
        if a.is_literal() {
            return a.clone();
        }
        if let TermKind::Bar(inner) = a.kind() {
            return inner.clone();
        }
        Term::raw(TermKind::Bar(a.clone()))
    }

    pub fn neg(a: &Term) -> Term {
        Term::mul(&Term::int(-1), a)
    }

    pub fn sub(a: &Term, b: &Term) -> Term {
        Term::add(a, &Term::neg(b))
    }

    pub fn sum<'a>(terms: impl IntoIterator<Item = &'a Term>) -> Term {
        terms
            .into_iter()
            .fold(Term::zero(), |acc, t| Term::add(&acc, t))
    }

    pub fn product<'a>(terms: impl IntoIterator<Item = &'a Term>) -> Term {
        terms
            .into_iter()
            .fold(Term::one(), |acc, t| Term::mul(&acc, t))
    }

    pub fn pow(a: &Term, e: u32) -> Term {
        (0..e).fold(Term::one(), |acc, _| Term::mul(&acc, a))
    }

    pub fn contains_bar(&self) -> bool {
        let mut found = false;
        self.visit(&mut |t| {
            if matches!(t.kind(), TermKind::Bar(_)) {
                found = true;
            }
        });
        found
    }

    /// Visits every distinct node once, children before parents.
    pub fn visit(&self, f: &mut dyn FnMut(&Term)) {
        let mut seen = HashSet::new();
        self.visit_inner(&mut seen, f);
    }

    pub(crate) fn visit_inner(&self, seen: &mut HashSet<u64>, f: &mut dyn FnMut(&Term)) {
        let mut stack: Vec<(Term, bool)> = vec![(self.clone(), false)];
        while let Some((t, expanded)) = stack.pop() {
            if expanded {
                f(&t);
                continue;
            }
            if !seen.insert(t.id()) {
                continue;
            }
            stack.push((t.clone(), true));
            match t.kind() {
                TermKind::Add(a, b) | TermKind::Mul(a, b) => {
                    stack.push((b.clone(), false));
                    stack.push((a.clone(), false));
                }
                TermKind::Bar(a) => stack.push((a.clone(), false)),
                _ => {}
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit(&mut |t| {
            if let TermKind::Var(v) = t.kind() {
                out.insert(v.clone());
            }
        });
        out
    }

    /// Number of distinct DAG nodes.
    pub fn dag_size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Simultaneous replacement of variables by terms.
    pub fn substitute(&self, map: &HashMap<Var, Term>) -> Term {
        let mut memo: HashMap<u64, Term> = HashMap::new();
        self.substitute_memo(map, &mut memo)
    }

    pub(crate) fn substitute_memo(
        &self,
        map: &HashMap<Var, Term>,
        memo: &mut HashMap<u64, Term>,
    ) -> Term {
        self.rebuild(memo, &mut |t, kids| match t.kind() {
            TermKind::Var(v) => map.get(v).cloned().unwrap_or_else(|| t.clone()),
            _ => rebuild_with(t, kids),
        })
    }

    /// Bottom-up rewrite: `f` receives each node and its rewritten children.
    pub fn rebuild(
        &self,
        memo: &mut HashMap<u64, Term>,
        f: &mut dyn FnMut(&Term, &[Term]) -> Term,
    ) -> Term {
        let mut order = Vec::new();
        let mut seen: HashSet<u64> = memo.keys().copied().collect();
        self.visit_inner(&mut seen, &mut |t| order.push(t.clone()));
        for t in order {
            let kids: Vec<Term> = match t.kind() {
                TermKind::Add(a, b) | TermKind::Mul(a, b) => vec![memo[&a.id()].clone(), memo[&b.id()].clone()],
                TermKind::Bar(a) => vec![memo[&a.id()].clone()],
                _ => vec![],
            };
            let out = f(&t, &kids);
            memo.insert(t.id(), out);
        }
        memo[&self.id()].clone()
    }

    /// Evaluates in a field, looking variables up through `env`.
    pub fn eval<K: FieldOps>(
        &self,
        field: &K,
        env: &dyn Fn(&Var) -> Option<K::Elem>,
    ) -> Result<K::Elem, TermEvalError> {
        let mut memo: HashMap<u64, K::Elem> = HashMap::new();
        self.eval_memo(field, env, &mut memo)
    }

    pub fn eval_memo<K: FieldOps>(
        &self,
        field: &K,
        env: &dyn Fn(&Var) -> Option<K::Elem>,
        memo: &mut HashMap<u64, K::Elem>,
    ) -> Result<K::Elem, TermEvalError> {
        let mut order = Vec::new();
        let mut seen: HashSet<u64> = memo.keys().copied().collect();
        self.visit_inner(&mut seen, &mut |t| order.push(t.clone()));
        for t in order {
            let v = match t.kind() {
                TermKind::Var(v) => env(v).ok_or_else(|| TermEvalError::Unbound(v.clone()))?,
                TermKind::Zero => field.zero(),
                TermKind::One => field.one(),
                TermKind::Int(n) => field.from_int(n),
                TermKind::Rat(r) => field
                    .from_rat(r)
                    .ok_or_else(|| TermEvalError::Denominator(r.clone()))?,
                TermKind::Add(a, b) => field.add(&memo[&a.id()], &memo[&b.id()]),
                TermKind::Mul(a, b) => field.mul(&memo[&a.id()], &memo[&b.id()]),
                TermKind::Bar(a) => field
                    .bar(&memo[&a.id()])
                    .ok_or(TermEvalError::NoInvolution)?,
            };
            memo.insert(t.id(), v);
        }
        Ok(memo[&self.id()].clone())
    }
}

/// Re-applies the smart constructor of `t`'s kind to new children.
pub(crate) fn rebuild_with(t: &Term, kids: &[Term]) -> Term {
    match t.kind() {
        TermKind::Add(..) => Term::add(&kids[0], &kids[1]),
        TermKind::Mul(..) => Term::mul(&kids[0], &kids[1]),
        TermKind::Bar(_) => Term::bar(&kids[0]),
        _ => t.clone(),
    }
}

/// Same as [`rebuild_with`] but without folding, preserving shape.
pub(crate) fn rebuild_raw(t: &Term, kids: &[Term]) -> Term {
    match t.kind() {
        TermKind::Add(..) => Term::raw(TermKind::Add(kids[0].clone(), kids[1].clone())),
        TermKind::Mul(..) => Term::raw(TermKind::Mul(kids[0].clone(), kids[1].clone())),
        TermKind::Bar(_) => Term::raw(TermKind::Bar(kids[0].clone())),
        _ => t.clone(),
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::lang::sexpr::term_to_sexpr(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::lang::sexpr::term_to_sexpr(self))
    }
}

pub(crate) fn literal_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        let (n, d) = (r.numer(), r.denom());
        let sign = if n.is_negative() { "-" } else { "" };
        format!("{sign}{}/{}", n.abs(), d)
    }
}
