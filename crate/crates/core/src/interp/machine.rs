//! Runtime of compiled formulas.

use std::collections::HashSet;

use super::compile::{Compiled, Instr, Node, NodeId, Plan, Stage};
use super::{EvalError, EvalOptions, Strategy};

/// Largest brute-force product examined when validating a linear-solve hint.
const VALIDATE_LIMIT: f64 = 2e5;

pub(crate) struct Machine<'c, 's> {
    c: &'c Compiled<'s>,
    pub env: Vec<u32>,
    regs: Vec<u32>,
    steps: u64,
    budget: u64,
    validate: bool,
    strategy: Strategy,
}

/// Affine solution set in prime-field coordinates.
struct Solutions {
    particular: Vec<u32>,
    basis: Vec<Vec<u32>>,
}

impl<'c, 's> Machine<'c, 's> {
    pub fn new(c: &'c Compiled<'s>, opts: &EvalOptions) -> Machine<'c, 's> {
        Machine {
            c,
            env: vec![0; c.slot_vars.len()],
            regs: vec![0; c.max_regs],
            steps: 0,
            budget: opts.budget,
            validate: opts.validate_hints,
            strategy: opts.strategy,
        }
    }

    fn tick(&mut self, n: u64) -> Result<(), EvalError> {
        self.steps += n;
        if self.steps > self.budget {
            return Err(EvalError::BudgetExceeded {
                needed: self.steps as f64,
                budget: self.budget,
            });
        }
        Ok(())
    }

    /// `lhs - rhs` of an atom under the current environment.
    fn atom_diff(&mut self, a: usize) -> Result<u32, EvalError> {
        self.tick(1)?;
        let s = self.c.structure;
        let atom = &self.c.atoms[a];
        for (i, ins) in atom.code.iter().enumerate() {
            self.regs[i] = match *ins {
                Instr::Const(k) => k,
                Instr::Slot(v) => self.env[v as usize],
                Instr::Add(x, y) => s.add_e(self.regs[x as usize], self.regs[y as usize]),
                Instr::Mul(x, y) => s.mul_e(self.regs[x as usize], self.regs[y as usize]),
                Instr::Bar(x) => s.bar_e(self.regs[x as usize]),
            };
        }
        Ok(s.sub_e(self.regs[atom.lhs as usize], self.regs[atom.rhs as usize]))
    }

    pub fn eval(&mut self, id: NodeId) -> Result<bool, EvalError> {
        let c = self.c;
        Ok(match &c.nodes[id] {
            Node::Const(b) => *b,
            Node::Atom(a) => self.atom_diff(*a)? == 0,
            Node::Not(a) => !self.eval(*a)?,
            Node::And(kids) => {
                for &k in kids {
                    if !self.eval(k)? {
                        return Ok(false);
                    }
                }
                true
            }
            Node::Or(kids) => {
                for &k in kids {
                    if self.eval(k)? {
                        return Ok(true);
                    }
                }
                false
            }
            Node::Implies(a, b) => !self.eval(*a)? || self.eval(*b)?,
            Node::Iff(a, b) => self.eval(*a)? == self.eval(*b)?,
            Node::Quant(q) => match self.strategy {
                Strategy::Naive => self.naive_quant(q.exists, &q.slots, q.body)?,
                Strategy::Guided => {
                    let found = self.run(&q.plan, 0, &mut |_| Ok(true))?;
                    if q.exists {
                        found
                    } else {
                        !found
                    }
                }
            },
        })
    }

    fn naive_quant(&mut self, exists: bool, slots: &[u32], body: NodeId) -> Result<bool, EvalError> {
        let size = self.c.structure.size();
        for &s in slots {
            self.env[s as usize] = 0;
        }
        loop {
            if self.eval(body)? == exists {
                return Ok(exists);
            }
            // odometer over the block, last slot fastest
            let mut i = slots.len();
            loop {
                if i == 0 {
                    return Ok(!exists);
                }
                i -= 1;
                let s = slots[i] as usize;
                self.env[s] += 1;
                if self.env[s] < size {
                    break;
                }
                self.env[s] = 0;
            }
        }
    }

    /// Runs stages from `i`; `leaf` is called for every complete witness and
    /// returns whether to stop. Returns true iff some leaf asked to stop.
    pub fn run(
        &mut self,
        plan: &Plan,
        i: usize,
        leaf: &mut dyn FnMut(&mut Machine) -> Result<bool, EvalError>,
    ) -> Result<bool, EvalError> {
        let Some(stage) = plan.stages.get(i) else {
            return leaf(self);
        };
        match stage {
            Stage::Check(lits) => {
                for &l in lits {
                    let (node, want) = plan.lits[l];
                    if self.eval(node)? != want {
                        return Ok(false);
                    }
                }
                self.run(plan, i + 1, leaf)
            }
            Stage::Enumerate(s) => {
                for v in self.c.structure.elements() {
                    self.tick(1)?;
                    self.env[*s as usize] = v;
                    if self.run(plan, i + 1, leaf)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Stage::Solve { slots, lits } => {
                let atoms: Vec<usize> = lits
                    .iter()
                    .map(|&l| match self.c.nodes[plan.lits[l].0] {
                        Node::Atom(a) => a,
                        _ => unreachable!("solve literals are atoms"),
                    })
                    .collect();
                let sols = self.solve(slots, &atoms)?;
                if self.validate {
                    self.validate_solve(slots, &atoms, sols.as_ref())?;
                }
                let Some(sols) = sols else {
                    return Ok(false);
                };
                let p = self.c.structure.characteristic();
                let free = sols.basis.len();
                let mut digits = vec![0u32; free];
                loop {
                    self.tick(1)?;
                    let mut coords = sols.particular.clone();
                    for (d, b) in digits.iter().zip(&sols.basis) {
                        if *d != 0 {
                            for (c, x) in coords.iter_mut().zip(b) {
                                *c = (*c + d * x) % p;
                            }
                        }
                    }
                    self.assign_coords(slots, &coords);
                    if self.run(plan, i + 1, leaf)? {
                        return Ok(true);
                    }
                    let mut k = 0;
                    loop {
                        if k == free {
                            return Ok(false);
                        }
                        digits[k] += 1;
                        if digits[k] < p {
                            break;
                        }
                        digits[k] = 0;
                        k += 1;
                    }
                }
            }
        }
    }

    fn assign_coords(&mut self, slots: &[u32], coords: &[u32]) {
        let k = self.c.structure.degree() as usize;
        for (j, &s) in slots.iter().enumerate() {
            self.env[s as usize] = self.c.structure.from_coords(&coords[j * k..(j + 1) * k]);
        }
    }

    /// Solves the atoms, which are affine over the prime field in the
    /// coordinates of `slots`. `None` when inconsistent.
    fn solve(&mut self, slots: &[u32], atoms: &[usize]) -> Result<Option<Solutions>, EvalError> {
        let st = self.c.structure;
        let p = st.characteristic();
        let k = st.degree() as usize;
        let n = slots.len() * k;
        for &s in slots {
            self.env[s as usize] = 0;
        }
        let mut base = Vec::with_capacity(atoms.len());
        for &a in atoms {
            base.push(st.coords(self.atom_diff(a)?));
        }
        // rows: one per (atom, coordinate); last column is the right side
        let mut m = vec![vec![0u32; n + 1]; atoms.len() * k];
        for (ai, b) in base.iter().enumerate() {
            for c in 0..k {
                m[ai * k + c][n] = (p - b[c]) % p;
            }
        }
        for (j, &s) in slots.iter().enumerate() {
            for c in 0..k {
                self.env[s as usize] = st.basis_elem(c as u32);
                let col = j * k + c;
                for (ai, &a) in atoms.iter().enumerate() {
                    let v = st.coords(self.atom_diff(a)?);
                    for r in 0..k {
                        m[ai * k + r][col] = (v[r] + p - base[ai][r]) % p;
                    }
                }
            }
            self.env[s as usize] = 0;
        }
        Ok(row_reduce(m, n, p))
    }

    /// Compares the solved set with brute-force enumeration of the block.
    fn validate_solve(&mut self, slots: &[u32], atoms: &[usize], sols: Option<&Solutions>) -> Result<(), EvalError> {
        let st = self.c.structure;
        let size = st.size();
        if (size as f64).powi(slots.len() as i32) > VALIDATE_LIMIT {
            return Ok(());
        }
        let saved: Vec<u32> = slots.iter().map(|&s| self.env[s as usize]).collect();
        let mut claimed = HashSet::new();
        if let Some(sols) = sols {
            let p = st.characteristic();
            let total = (p as u64).pow(sols.basis.len() as u32);
            for idx in 0..total {
                let mut coords = sols.particular.clone();
                let mut rest = idx;
                for b in &sols.basis {
                    let d = (rest % p as u64) as u32;
                    rest /= p as u64;
                    for (c, x) in coords.iter_mut().zip(b) {
                        *c = (*c + d * x) % p;
                    }
                }
                self.assign_coords(slots, &coords);
                claimed.insert(slots.iter().map(|&s| self.env[s as usize]).collect::<Vec<u32>>());
            }
        }
        let mut actual = HashSet::new();
        let mut tuple = vec![0u32; slots.len()];
        'outer: loop {
            for (&s, &v) in slots.iter().zip(&tuple) {
                self.env[s as usize] = v;
            }
            let mut ok = true;
            for &a in atoms {
                if self.atom_diff(a)? != 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                actual.insert(tuple.clone());
            }
            for t in tuple.iter_mut() {
                *t += 1;
                if *t < size {
                    continue 'outer;
                }
                *t = 0;
            }
            break;
        }
        for (&s, &v) in slots.iter().zip(&saved) {
            self.env[s as usize] = v;
        }
        if claimed != actual {
            let names: Vec<String> = slots.iter().map(|&s| self.c.slot_vars[s as usize].to_string()).collect();
            return Err(EvalError::InvalidHint(format!(
                "linear solve over ({}) gave {} tuples, enumeration found {}",
                names.join(", "),
                claimed.len(),
                actual.len()
            )));
        }
        Ok(())
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut r, mut e, mut b) = (1u64, p as u64 - 2, a as u64);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Gauss-Jordan elimination of an augmented system over `F_p`.
fn row_reduce(mut m: Vec<Vec<u32>>, n: usize, p: u32) -> Option<Solutions> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(r) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, r);
        let inv = inv_mod(m[row][col], p);
        for x in m[row].iter_mut() {
            *x = (*x as u64 * inv as u64 % p as u64) as u32;
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..=n {
                    m[r][c] = (m[r][c] + (p - f) * m[row][c] % p) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| r[n] != 0) {
        return None;
    }
    let mut particular = vec![0u32; n];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = m[r][n];
    }
    let basis = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![0u32; n];
            v[f] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = (p - m[r][f]) % p;
            }
            v
        })
        .collect();
    Some(Solutions { particular, basis })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_reduce_counts_solutions() {
        // x + y = 1, 2x + 2y = 2 over F_3: one free column
        let m = vec![vec![1, 1, 1], vec![2, 2, 2]];
        let s = row_reduce(m, 2, 3).unwrap();
        assert_eq!(s.basis.len(), 1);
        assert_eq!((s.particular[0] + s.particular[1]) % 3, 1);
        let inconsistent = vec![vec![1, 1, 1], vec![1, 1, 2]];
        assert!(row_reduce(inconsistent, 2, 3).is_none());
    }
}
