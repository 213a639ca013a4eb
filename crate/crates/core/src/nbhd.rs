//! Finite one-shot strategic stit frames and models.
//!
//! Neighbourhoods are stored by their generators: `gens(i, w)` is a
//! nonempty antichain of nonempty state sets and the neighbourhood of `i`
//! at `w` is its up-closure. Since the up-closure of an antichain has that
//! antichain as its minimal elements, the generators are exactly the
//! non-monotonic core.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{CheckReport, Witness};
use crate::syntax::AgentId;

/// Maximum number of states a frame may have (subsets are `u64` bitmasks).
pub const MAX_STATES: usize = 64;

/// A set of states as a bitmask over the frame's state order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        if n >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1u64 << i)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Subset {
        Subset(indices.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..64).filter(move |i| bits >> i & 1 == 1)
    }

    /// Ordering used for canonical antichains: lexicographic on sorted indices.
    pub fn canonical_cmp(&self, other: &Subset) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

pub fn union_all(sets: &[Subset]) -> Subset {
    sets.iter().fold(Subset::EMPTY, |acc, s| acc.union(*s))
}

/// The ⊆-minimal members of a family (`Y ⊂ X` strictly excludes `X`).
pub fn minimal_elements(family: &[Subset]) -> Vec<Subset> {
    let mut out: Vec<Subset> = family
        .iter()
        .copied()
        .filter(|x| !family.iter().any(|y| y != x && y.is_subset(*x)))
        .collect();
    canonicalize(&mut out);
    out
}

pub fn is_antichain(family: &[Subset]) -> bool {
    family
        .iter()
        .enumerate()
        .all(|(i, x)| family.iter().enumerate().all(|(j, y)| i == j || !x.is_subset(*y)))
}

pub fn canonicalize(family: &mut Vec<Subset>) {
    family.sort_by(Subset::canonical_cmp);
    family.dedup();
}

/// Ordered list of distinct state names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl StateSet {
    pub fn new(names: Vec<String>) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::InvalidFrame("state set must be nonempty".into()));
        }
        if names.len() > MAX_STATES {
            return Err(Error::InvalidFrame(format!(
                "{} states exceed the supported maximum of {MAX_STATES}",
                names.len()
            )));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::InvalidFrame(format!("duplicate state `{n}`")));
            }
        }
        Ok(StateSet { names, index })
    }

    /// States `w1..wn`.
    pub fn numbered(n: usize) -> Result<Self> {
        StateSet::new((1..=n).map(|i| format!("w{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn subset(&self, names: &[impl AsRef<str>]) -> Result<Subset> {
        names
            .iter()
            .map(|n| self.index_of(n.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(Subset::from_indices)
    }

    pub fn names_of(&self, set: Subset) -> Vec<String> {
        set.iter().map(|i| self.names[i].clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NbhdFrame {
    states: StateSet,
    agents: Vec<AgentId>,
    /// `gens[agent][state]`, canonically ordered antichains.
    gens: Vec<Vec<Vec<Subset>>>,
}

impl NbhdFrame {
    /// Builds a frame, enforcing the generator invariants: every
    /// `gens[i][w]` is a nonempty antichain of nonempty subsets of `W`.
    /// Class conditions such as (nec) are checked separately.
    pub fn new(states: StateSet, agents: Vec<AgentId>, mut gens: Vec<Vec<Vec<Subset>>>) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::InvalidFrame("agent set must be nonempty".into()));
        }
        for (k, a) in agents.iter().enumerate() {
            if agents[..k].contains(a) {
                return Err(Error::InvalidFrame(format!("duplicate agent `{a}`")));
            }
        }
        if gens.len() != agents.len() {
            return Err(Error::InvalidFrame("one generator table per agent required".into()));
        }
        let full = states.full();
        for (a, per_state) in agents.iter().zip(gens.iter_mut()) {
            if per_state.len() != states.len() {
                return Err(Error::InvalidFrame(format!("agent `{a}` lacks generators for some state")));
            }
            for (w, family) in per_state.iter_mut().enumerate() {
                let at = || format!("agent `{a}` at state `{}`", states.name(w));
                if family.is_empty() {
                    return Err(Error::InvalidFrame(format!("{}: no generators", at())));
                }
                if family.iter().any(|g| g.is_empty()) {
                    return Err(Error::InvalidFrame(format!("{}: empty generator", at())));
                }
                if family.iter().any(|g| !g.is_subset(full)) {
                    return Err(Error::InvalidFrame(format!("{}: generator outside W", at())));
                }
                canonicalize(family);
                if !is_antichain(family) {
                    return Err(Error::InvalidFrame(format!(
                        "{}: generators do not form an antichain",
                        at()
                    )));
                }
            }
        }
        Ok(NbhdFrame { states, agents, gens })
    }

    /// Same generators at every state for each agent.
    pub fn uniform(states: StateSet, agents: Vec<AgentId>, per_agent: Vec<Vec<Subset>>) -> Result<Self> {
        let n = states.len();
        let gens = per_agent.into_iter().map(|g| vec![g; n]).collect();
        NbhdFrame::new(states, agents, gens)
    }

    pub fn states(&self) -> &StateSet {
        &self.states
    }

    pub fn agents(&self) -> &[AgentId] {
        &self.agents
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn full(&self) -> Subset {
        self.states.full()
    }

    pub fn agent_index(&self, agent: &AgentId) -> Result<usize> {
        self.agents
            .iter()
            .position(|a| a == agent)
            .ok_or_else(|| Error::UnknownAgent(agent.to_string()))
    }

    pub fn gens_at(&self, agent: usize, state: usize) -> &[Subset] {
        &self.gens[agent][state]
    }

    pub fn gens_table(&self) -> &[Vec<Vec<Subset>>] {
        &self.gens
    }

    /// Non-monotonic core of `agent` at `state`.
    pub fn core(&self, agent: &AgentId, state: &str) -> Result<&[Subset]> {
        let a = self.agent_index(agent)?;
        let w = self.states.index_of(state)?;
        Ok(self.gens_at(a, w))
    }

    pub fn member_at(&self, agent: usize, state: usize, x: Subset) -> bool {
        self.gens[agent][state].iter().any(|g| g.is_subset(x))
    }

    /// `X ∈ N_agent(state)`.
    pub fn member(&self, agent: &AgentId, state: &str, x: Subset) -> Result<bool> {
        let a = self.agent_index(agent)?;
        let w = self.states.index_of(state)?;
        Ok(self.member_at(a, w, x))
    }

    pub fn core_union(&self, agent: usize, state: usize) -> Subset {
        union_all(&self.gens[agent][state])
    }

    fn named_sets(&self, sets: &[Subset]) -> Vec<Vec<String>> {
        sets.iter().map(|s| self.states.names_of(*s)).collect()
    }

    /// Independence of distinct agents: their core cells pairwise intersect.
    pub fn check_ind(&self) -> CheckReport {
        for w in 0..self.len() {
            for a in 0..self.agents.len() {
                for b in 0..self.agents.len() {
                    if a == b {
                        continue;
                    }
                    for &x in &self.gens[a][w] {
                        for &y in &self.gens[b][w] {
                            if !x.intersects(y) {
                                return CheckReport::fail(
                                    "ind",
                                    Witness {
                                        states: vec![self.states.name(w).to_string()],
                                        agents: vec![self.agents[a].clone(), self.agents[b].clone()],
                                        sets: self.named_sets(&[x, y]),
                                        detail: "disjoint choices of distinct agents".into(),
                                    },
                                );
                            }
                        }
                    }
                }
            }
        }
        CheckReport::pass("ind")
    }

    /// Historical necessity of abilities: identical neighbourhoods at all states.
    ///
    /// On failure the witness is `(i, w, w', X)` with `X ∈ N_i(w) \ N_i(w')`.
    pub fn check_nec(&self) -> CheckReport {
        for (a, per_state) in self.gens.iter().enumerate() {
            for (w, family) in per_state.iter().enumerate() {
                for v in 0..self.len() {
                    if let Some(&x) = family.iter().find(|&&x| !self.member_at(a, v, x)) {
                        return CheckReport::fail(
                            "nec",
                            Witness {
                                states: vec![self.states.name(w).to_string(), self.states.name(v).to_string()],
                                agents: vec![self.agents[a].clone()],
                                sets: self.named_sets(&[x]),
                                detail: "choice available at the first state but not at the second".into(),
                            },
                        );
                    }
                }
            }
        }
        CheckReport::pass("nec")
    }

    /// Core cells of every agent cover `W` at every state.
    pub fn check_un(&self) -> CheckReport {
        let full = self.full();
        for (a, per_state) in self.gens.iter().enumerate() {
            for (w, family) in per_state.iter().enumerate() {
                let uncovered = full.difference(union_all(family));
                if !uncovered.is_empty() {
                    return CheckReport::fail(
                        "un",
                        Witness {
                            states: vec![self.states.name(w).to_string()],
                            agents: vec![self.agents[a].clone()],
                            sets: self.named_sets(&[uncovered]),
                            detail: "states not covered by the core".into(),
                        },
                    );
                }
            }
        }
        CheckReport::pass("un")
    }

    /// Core cells of each agent are pairwise disjoint at every state.
    pub fn check_partition_cores(&self) -> CheckReport {
        for (a, per_state) in self.gens.iter().enumerate() {
            for (w, family) in per_state.iter().enumerate() {
                for (k, &x) in family.iter().enumerate() {
                    for &y in &family[k + 1..] {
                        if x.intersects(y) {
                            return CheckReport::fail(
                                "partition",
                                Witness {
                                    states: vec![self.states.name(w).to_string()],
                                    agents: vec![self.agents[a].clone()],
                                    sets: self.named_sets(&[x, y, x.intersection(y)]),
                                    detail: "overlapping core cells (third set is the overlap)".into(),
                                },
                            );
                        }
                    }
                }
            }
        }
        CheckReport::pass("partition")
    }

    pub fn is_class_c(&self) -> CheckReport {
        CheckReport::all(
            "class C",
            [
                CheckReport::pass("generators (monotone, N, D)"),
                self.check_ind(),
                self.check_nec(),
                self.check_un(),
            ],
        )
    }

    pub fn is_class_p(&self) -> CheckReport {
        let c = self.is_class_c();
        let p = self.check_partition_cores();
        CheckReport::all("class P", [c, p])
    }

    /// `R_i = (⋃ core_i(w))²`; requires (nec).
    pub fn relation_ri(&self, agent: &AgentId) -> Result<Relation> {
        let a = self.agent_index(agent)?;
        let nec = self.check_nec();
        if !nec.holds {
            return Err(Error::Precondition(
                "R_i is only defined on frames satisfying (nec)".into(),
            ));
        }
        let field = self.core_union(a, 0);
        let rows = (0..self.len())
            .map(|w| if field.contains(w) { field } else { Subset::EMPTY })
            .collect();
        Ok(Relation::new(rows))
    }
}

/// A binary relation on the states of a frame, as successor rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub rows: Vec<Subset>,
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
}

impl Relation {
    pub fn new(rows: Vec<Subset>) -> Self {
        let field = (0..rows.len()).fold(Subset::EMPTY, |acc, w| {
            if rows[w].is_empty() {
                acc
            } else {
                acc.union(Subset::singleton(w)).union(rows[w])
            }
        });
        let reflexive = field.iter().all(|w| rows[w].contains(w));
        let symmetric = (0..rows.len()).all(|w| rows[w].iter().all(|v| rows[v].contains(w)));
        let transitive = (0..rows.len()).all(|w| rows[w].iter().all(|v| rows[v].is_subset(rows[w])));
        Relation {
            rows,
            reflexive,
            symmetric,
            transitive,
        }
    }

    pub fn related(&self, w: usize, v: usize) -> bool {
        self.rows[w].contains(v)
    }

    pub fn is_universal(&self) -> bool {
        let full = Subset::full(self.rows.len());
        self.rows.iter().all(|r| *r == full)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(w, r)| r.iter().map(move |v| (w, v)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NbhdModel {
    pub frame: NbhdFrame,
    /// Atoms missing from the map denote the empty set.
    pub valuation: BTreeMap<String, Subset>,
}

impl NbhdModel {
    pub fn new(frame: NbhdFrame, valuation: BTreeMap<String, Subset>) -> Result<Self> {
        let full = frame.full();
        if let Some((p, _)) = valuation.iter().find(|(_, s)| !s.is_subset(full)) {
            return Err(Error::InvalidModel(format!("valuation of `{p}` outside W")));
        }
        Ok(NbhdModel { frame, valuation })
    }

    pub fn value(&self, atom: &str) -> Subset {
        self.valuation.get(atom).copied().unwrap_or(Subset::EMPTY)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text)?;
        file.into_model()
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile::from_model(self)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("model file serializes")
    }
}

impl fmt::Display for NbhdModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json_string())
    }
}

/// Per-agent choice specification in the model file format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChoiceSpec {
    Uniform { uniform: Vec<Vec<String>> },
    PerState(BTreeMap<String, Vec<Vec<String>>>),
}

/// JSON model file:
/// `{ "states", "agents", "choice": { AGENT: { STATE: [[..]..] } | { "uniform": [[..]..] } }, "valuation" }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelFile {
    pub states: Vec<String>,
    pub agents: Vec<String>,
    pub choice: BTreeMap<String, ChoiceSpec>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
}

impl ModelFile {
    pub fn into_model(self) -> Result<NbhdModel> {
        let states = StateSet::new(self.states)?;
        let agents = self
            .agents
            .into_iter()
            .map(AgentId::new)
            .collect::<Result<Vec<_>>>()?;
        if let Some(extra) = self.choice.keys().find(|k| !agents.iter().any(|a| a.as_str() == k.as_str())) {
            return Err(Error::UnknownAgent(extra.clone()));
        }
        let family = |cells: &Vec<Vec<String>>| -> Result<Vec<Subset>> {
            cells.iter().map(|c| states.subset(c)).collect()
        };
        let mut gens = Vec::with_capacity(agents.len());
        for a in &agents {
            let spec = self
                .choice
                .get(a.as_str())
                .ok_or_else(|| Error::InvalidFrame(format!("no choice given for agent `{a}`")))?;
            let per_state = match spec {
                ChoiceSpec::Uniform { uniform } => vec![family(uniform)?; states.len()],
                ChoiceSpec::PerState(map) => {
                    for s in map.keys() {
                        states.index_of(s)?;
                    }
                    states
                        .names()
                        .iter()
                        .map(|s| {
                            map.get(s).ok_or_else(|| {
                                Error::InvalidFrame(format!("agent `{a}` has no choice at state `{s}`"))
                            })
                            .and_then(family)
                        })
                        .collect::<Result<Vec<_>>>()?
                }
            };
            gens.push(per_state);
        }
        let valuation = self
            .valuation
            .iter()
            .map(|(p, ws)| Ok((p.clone(), states.subset(ws)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let frame = NbhdFrame::new(states, agents, gens)?;
        NbhdModel::new(frame, valuation)
    }

    pub fn from_model(model: &NbhdModel) -> Self {
        let frame = &model.frame;
        let st = frame.states();
        let cells = |family: &[Subset]| family.iter().map(|s| st.names_of(*s)).collect::<Vec<_>>();
        let choice = frame
            .agents()
            .iter()
            .enumerate()
            .map(|(a, agent)| {
                let table = &frame.gens_table()[a];
                let spec = if table.iter().all(|g| *g == table[0]) {
                    ChoiceSpec::Uniform { uniform: cells(&table[0]) }
                } else {
                    ChoiceSpec::PerState(
                        table
                            .iter()
                            .enumerate()
                            .map(|(w, g)| (st.name(w).to_string(), cells(g)))
                            .collect(),
                    )
                };
                (agent.to_string(), spec)
            })
            .collect();
        ModelFile {
            states: st.names().to_vec(),
            agents: frame.agents().iter().map(|a| a.to_string()).collect(),
            choice,
            valuation: model
                .valuation
                .iter()
                .map(|(p, s)| (p.clone(), st.names_of(*s)))
                .collect(),
        }
    }
}
