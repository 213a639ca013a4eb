//! Model checking the strategic language over neighbourhood models.
//!
//! Formulas are compiled into a program of distinct subformulas in
//! post-order, so shared subformulas are evaluated once per model. `box` is
//! the universal modality, optionally restricted to the cell of a partition
//! of `W` containing the current state (used for disjoint unions).

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::nbhd::{NbhdModel, Subset};
use crate::syntax::{AgentId, Formula};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Op {
    Atom(String),
    Not(usize),
    Or(usize, usize),
    And(usize, usize),
    Implies(usize, usize),
    Iff(usize, usize),
    Nec(usize),
    Poss(usize),
    Ability(usize, usize),
    AbilityDual(usize, usize),
    ForallCore(usize, usize),
    ForallCoreDual(usize, usize),
}

/// A compiled strategic formula.
#[derive(Debug, Clone)]
pub struct Program {
    ops: Vec<Op>,
    agents: Vec<AgentId>,
    root: usize,
}

impl Program {
    pub fn compile(f: &Formula) -> Result<Program> {
        let mut builder = Builder::default();
        let root = builder.node(f)?;
        Ok(Program {
            ops: builder.ops,
            agents: builder.agents,
            root,
        })
    }

    /// Number of distinct subformulas.
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Resolves the program's agents against a model's agent list.
    pub fn bind(&self, model: &NbhdModel) -> Result<Vec<usize>> {
        self.agents.iter().map(|a| model.frame.agent_index(a)).collect()
    }

    pub fn extension(&self, model: &NbhdModel) -> Result<Subset> {
        let bound = self.bind(model)?;
        Ok(self.run(model, &bound, &[model.frame.full()]))
    }

    /// Extension with `box` scoped to the cells of `scopes` (a partition of `W`).
    pub fn extension_scoped(&self, model: &NbhdModel, scopes: &[Subset]) -> Result<Subset> {
        let bound = self.bind(model)?;
        Ok(self.run(model, &bound, scopes))
    }

    /// Evaluation with agents already bound via [`Program::bind`].
    pub fn run(&self, model: &NbhdModel, agents: &[usize], scopes: &[Subset]) -> Subset {
        let frame = &model.frame;
        let full = frame.full();
        let n = frame.len();
        let nec = |s: Subset| {
            scopes
                .iter()
                .filter(|c| c.is_subset(s))
                .fold(Subset::EMPTY, |acc, c| acc.union(*c))
        };
        let ability = |a: usize, s: Subset| {
            Subset::from_indices((0..n).filter(|&w| frame.member_at(a, w, s)))
        };
        let forall_core = |a: usize, s: Subset| {
            Subset::from_indices((0..n).filter(|&w| frame.core_union(a, w).is_subset(s)))
        };
        let mut vals: Vec<Subset> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let v = match *op {
                Op::Atom(ref p) => model.value(p).intersection(full),
                Op::Not(x) => full.difference(vals[x]),
                Op::Or(x, y) => vals[x].union(vals[y]),
                Op::And(x, y) => vals[x].intersection(vals[y]),
                Op::Implies(x, y) => full.difference(vals[x]).union(vals[y]),
                Op::Iff(x, y) => full.difference(Subset(vals[x].0 ^ vals[y].0)),
                Op::Nec(x) => nec(vals[x]),
                Op::Poss(x) => full.difference(nec(full.difference(vals[x]))),
                Op::Ability(a, x) => ability(agents[a], vals[x]),
                Op::AbilityDual(a, x) => full.difference(ability(agents[a], full.difference(vals[x]))),
                Op::ForallCore(a, x) => forall_core(agents[a], vals[x]),
                Op::ForallCoreDual(a, x) => {
                    full.difference(forall_core(agents[a], full.difference(vals[x])))
                }
            };
            vals.push(v);
        }
        vals[self.root]
    }
}

#[derive(Default)]
struct Builder {
    ops: Vec<Op>,
    memo: HashMap<Op, usize>,
    agents: Vec<AgentId>,
}

impl Builder {
    fn agent(&mut self, a: &AgentId) -> usize {
        match self.agents.iter().position(|b| b == a) {
            Some(i) => i,
            None => {
                self.agents.push(a.clone());
                self.agents.len() - 1
            }
        }
    }

    fn push(&mut self, op: Op) -> usize {
        if let Some(&i) = self.memo.get(&op) {
            return i;
        }
        self.ops.push(op.clone());
        self.memo.insert(op, self.ops.len() - 1);
        self.ops.len() - 1
    }

    fn node(&mut self, f: &Formula) -> Result<usize> {
        use Formula as F;
        let op = match f {
            F::Atom(p) => Op::Atom(p.clone()),
            F::Not(a) => Op::Not(self.node(a)?),
            F::Or(a, b) => Op::Or(self.node(a)?, self.node(b)?),
            F::And(a, b) => Op::And(self.node(a)?, self.node(b)?),
            F::Implies(a, b) => Op::Implies(self.node(a)?, self.node(b)?),
            F::Iff(a, b) => Op::Iff(self.node(a)?, self.node(b)?),
            F::Necessity(a) => Op::Nec(self.node(a)?),
            F::Possibility(a) => Op::Poss(self.node(a)?),
            F::Ability(i, a) => {
                let x = self.node(a)?;
                Op::Ability(self.agent(i), x)
            }
            F::AbilityDual(i, a) => {
                let x = self.node(a)?;
                Op::AbilityDual(self.agent(i), x)
            }
            F::ForallCore(i, a) => {
                let x = self.node(a)?;
                Op::ForallCore(self.agent(i), x)
            }
            F::ForallCoreDual(i, a) => {
                let x = self.node(a)?;
                Op::ForallCoreDual(self.agent(i), x)
            }
            F::Stit(..) | F::StitDual(..) => {
                return Err(Error::UnsupportedOperator(
                    "[stit:i] cannot be evaluated on a neighbourhood model".into(),
                ))
            }
        };
        Ok(self.push(op))
    }
}

/// `⟦f⟧`: the set of states of `model` where `f` holds.
pub fn extension(model: &NbhdModel, f: &Formula) -> Result<Subset> {
    Program::compile(f)?.extension(model)
}

pub fn eval(model: &NbhdModel, state: &str, f: &Formula) -> Result<bool> {
    let w = model.frame.states().index_of(state)?;
    Ok(extension(model, f)?.contains(w))
}

/// `[agent] f` via the core: some core cell lies inside `⟦f⟧`.
pub fn eval_ability_core(model: &NbhdModel, state: &str, agent: &AgentId, f: &Formula) -> Result<bool> {
    let frame = &model.frame;
    let w = frame.states().index_of(state)?;
    let a = frame.agent_index(agent)?;
    let ext = extension(model, f)?;
    Ok(frame.gens_at(a, w).iter().any(|cell| cell.is_subset(ext)))
}

/// `[E:agent] f` via the relation `R_i`; requires (nec).
pub fn eval_forall_rel(model: &NbhdModel, state: &str, agent: &AgentId, f: &Formula) -> Result<bool> {
    let w = model.frame.states().index_of(state)?;
    let relation = model.frame.relation_ri(agent)?;
    let ext = extension(model, f)?;
    Ok(relation.rows[w].is_subset(ext))
}
