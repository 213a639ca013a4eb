//! The axiom system as instantiable schemas, random class-C model
//! generation, soundness fuzzing, the falsifying valuations for frames
//! violating (ind), (nec) or (un), and bounded validity search.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::btac::{BtFrame, BtacModel};
use crate::error::{Error, Result};
use crate::mc::Program;
use crate::nbhd::{minimal_elements, union_all, NbhdFrame, NbhdModel, StateSet, Subset};
use crate::report::{CheckReport, Witness};
use crate::syntax::{AgentId, Formula};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomSchema {
    Incl,
    M,
    N,
    D,
    Pos,
    NecA,
    Ind,
    KBox,
    TBox,
    FourBox,
    FiveBox,
    TExists,
    FourExists,
    BExists,
}

impl AxiomSchema {
    pub const ALL: [AxiomSchema; 14] = [
        AxiomSchema::Incl,
        AxiomSchema::M,
        AxiomSchema::N,
        AxiomSchema::D,
        AxiomSchema::Pos,
        AxiomSchema::NecA,
        AxiomSchema::Ind,
        AxiomSchema::KBox,
        AxiomSchema::TBox,
        AxiomSchema::FourBox,
        AxiomSchema::FiveBox,
        AxiomSchema::TExists,
        AxiomSchema::FourExists,
        AxiomSchema::BExists,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            AxiomSchema::Incl => "Incl",
            AxiomSchema::M => "M",
            AxiomSchema::N => "N",
            AxiomSchema::D => "D",
            AxiomSchema::Pos => "Pos",
            AxiomSchema::NecA => "Nec-A",
            AxiomSchema::Ind => "Ind",
            AxiomSchema::KBox => "K-box",
            AxiomSchema::TBox => "T-box",
            AxiomSchema::FourBox => "4-box",
            AxiomSchema::FiveBox => "5-box",
            AxiomSchema::TExists => "T-E",
            AxiomSchema::FourExists => "4-E",
            AxiomSchema::BExists => "B-E",
        }
    }

    /// Formula slots; `None` for `Ind`, which takes one formula per agent.
    pub fn formula_arity(self) -> Option<usize> {
        Some(match self {
            AxiomSchema::N | AxiomSchema::D => 0,
            AxiomSchema::M | AxiomSchema::KBox => 2,
            AxiomSchema::Ind => return None,
            _ => 1,
        })
    }

    /// Agent slots; `None` for `Ind` (any nonempty list of distinct agents).
    pub fn agent_arity(self) -> Option<usize> {
        Some(match self {
            AxiomSchema::KBox | AxiomSchema::TBox | AxiomSchema::FourBox | AxiomSchema::FiveBox => 0,
            AxiomSchema::Ind => return None,
            _ => 1,
        })
    }

    /// Whether validity of the schema only needs the generator invariants
    /// (monotonicity, `W ∈ N`, `∅ ∉ N`) rather than the full class C.
    pub fn needs_only_monotone(self) -> bool {
        matches!(
            self,
            AxiomSchema::M
                | AxiomSchema::N
                | AxiomSchema::D
                | AxiomSchema::Incl
                | AxiomSchema::KBox
                | AxiomSchema::TBox
                | AxiomSchema::FourBox
                | AxiomSchema::FiveBox
        )
    }
}

impl fmt::Display for AxiomSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for AxiomSchema {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace(['_', ' '], "-");
        AxiomSchema::ALL
            .into_iter()
            .find(|a| a.tag().to_ascii_lowercase() == key || a.tag().replace('-', "").to_ascii_lowercase() == key)
            .ok_or_else(|| Error::Format(format!("unknown schema `{s}`")))
    }
}

pub fn parse_schema_list(list: &str) -> Result<Vec<AxiomSchema>> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(AxiomSchema::ALL.to_vec());
    }
    list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

/// Fills the schema's formula and agent slots.
pub fn instantiate(schema: AxiomSchema, formulas: &[Formula], agents: &[AgentId]) -> Result<Formula> {
    use AxiomSchema::*;
    if let Some(n) = schema.formula_arity() {
        if formulas.len() != n {
            return Err(Error::Arity(format!("{schema} takes {n} formulas, got {}", formulas.len())));
        }
    }
    if let Some(n) = schema.agent_arity() {
        if agents.len() != n {
            return Err(Error::Arity(format!("{schema} takes {n} agents, got {}", agents.len())));
        }
    }
    let phi = || formulas[0].clone();
    let psi = || formulas[1].clone();
    let imp = Formula::implies;
    Ok(match schema {
        Incl => imp(Formula::nec(phi()), Formula::ability(&agents[0], phi())),
        M => {
            let i = &agents[0];
            imp(
                Formula::ability(i, Formula::and(phi(), psi())),
                Formula::and(Formula::ability(i, phi()), Formula::ability(i, psi())),
            )
        }
        N => Formula::ability(&agents[0], Formula::top()),
        D => Formula::not(Formula::ability(&agents[0], Formula::bottom())),
        Pos => Formula::iff(Formula::nec(phi()), Formula::forall_core(&agents[0], phi())),
        NecA => {
            let a = Formula::ability(&agents[0], phi());
            imp(a.clone(), Formula::nec(a))
        }
        Ind => {
            if agents.is_empty() || agents.len() != formulas.len() {
                return Err(Error::Arity(format!(
                    "Ind takes one formula per agent (got {} formulas, {} agents)",
                    formulas.len(),
                    agents.len()
                )));
            }
            for (k, a) in agents.iter().enumerate() {
                if agents[..k].contains(a) {
                    return Err(Error::Arity(format!("Ind agents must be distinct (`{a}` repeats)")));
                }
            }
            let abilities = agents
                .iter()
                .zip(formulas)
                .map(|(a, f)| Formula::ability(a, f.clone()));
            let lhs = Formula::conjunction(abilities).expect("nonempty");
            let rhs = Formula::poss(Formula::conjunction(formulas.iter().cloned()).expect("nonempty"));
            imp(lhs, rhs)
        }
        KBox => imp(
            Formula::nec(imp(phi(), psi())),
            imp(Formula::nec(phi()), Formula::nec(psi())),
        ),
        TBox => imp(Formula::nec(phi()), phi()),
        FourBox => imp(Formula::nec(phi()), Formula::nec(Formula::nec(phi()))),
        FiveBox => imp(Formula::poss(phi()), Formula::nec(Formula::poss(phi()))),
        TExists => imp(Formula::forall_core(&agents[0], phi()), phi()),
        FourExists => {
            let i = &agents[0];
            imp(
                Formula::forall_core(i, phi()),
                Formula::forall_core(i, Formula::forall_core(i, phi())),
            )
        }
        BExists => {
            let i = &agents[0];
            imp(phi(), Formula::forall_core(i, Formula::forall_core_dual(i, phi())))
        }
    })
}

/// Agents `a, b, c, ...`.
pub fn agent_names(k: usize) -> Vec<AgentId> {
    (0..k)
        .map(|i| {
            let letter = (b'a' + (i % 26) as u8) as char;
            let name = if i < 26 { letter.to_string() } else { format!("{letter}{}", i / 26) };
            AgentId::new(name).expect("generated agent names are identifiers")
        })
        .collect()
}

/// Atoms `p, q, r, s, t, p5, p6, ...`.
pub fn atom_names(k: usize) -> Vec<String> {
    const BASE: [&str; 5] = ["p", "q", "r", "s", "t"];
    (0..k)
        .map(|i| BASE.get(i).map(|s| s.to_string()).unwrap_or_else(|| format!("p{i}")))
        .collect()
}

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

// ---------------------------------------------------------------------------
// Frame generation

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameStyle {
    /// Product construction: agent `i`'s cells are the preimages of the
    /// `i`-th coordinate; every coordinate combination is inhabited.
    Grid,
    /// A grid with merged cells or extra overlapping covering cells.
    Perturbed,
}

impl FromStr for FrameStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(FrameStyle::Grid),
            "perturbed" => Ok(FrameStyle::Perturbed),
            _ => Err(Error::Format(format!("unknown frame style `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameParams {
    pub states: usize,
    pub agents: usize,
    pub seed: u64,
    pub style: FrameStyle,
    /// Grid dimensions (cells per agent); random when absent.
    pub cells: Option<Vec<usize>>,
}

/// A class-C frame with uniform generators.
pub fn generate_frame(params: &FrameParams) -> Result<NbhdFrame> {
    let mut rng = rng_for(params.seed, 0);
    random_class_c_frame(&mut rng, params.states, params.agents, params.style, params.cells.as_deref())
}

pub fn random_class_c_frame<R: Rng>(
    rng: &mut R,
    n: usize,
    k: usize,
    style: FrameStyle,
    cells: Option<&[usize]>,
) -> Result<NbhdFrame> {
    if n == 0 || k == 0 {
        return Err(Error::Precondition("need at least one state and one agent".into()));
    }
    let dims = match cells {
        Some(c) => {
            if c.len() != k || c.contains(&0) {
                return Err(Error::Precondition("one positive cell count per agent required".into()));
            }
            let product: usize = c.iter().product();
            if product > n {
                return Err(Error::Precondition(format!(
                    "a {} grid needs {product} states but only {n} are available",
                    c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("x")
                )));
            }
            c.to_vec()
        }
        None => random_dims(rng, n, k),
    };
    let grid = grid_cores(rng, n, &dims);
    let states = StateSet::numbered(n)?;
    let agents = agent_names(k);
    let frame = NbhdFrame::uniform(states.clone(), agents.clone(), grid.clone())?;
    if style == FrameStyle::Grid {
        return Ok(frame);
    }
    for _ in 0..50 {
        let mut cores = grid.clone();
        for _ in 0..rng.gen_range(1..=3) {
            perturb(rng, n, &mut cores);
        }
        if let Ok(f) = NbhdFrame::uniform(states.clone(), agents.clone(), cores) {
            if f.is_class_c().holds {
                return Ok(f);
            }
        }
    }
    Ok(frame)
}

fn random_dims<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<usize> {
    let mut dims = vec![1; k];
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(rng);
    let mut product = 1;
    for i in order {
        dims[i] = rng.gen_range(1..=n / product);
        product *= dims[i];
    }
    dims
}

fn grid_cores<R: Rng>(rng: &mut R, n: usize, dims: &[usize]) -> Vec<Vec<Subset>> {
    let combos: usize = dims.iter().product();
    let mut tuples: Vec<Vec<usize>> = (0..combos)
        .map(|mut c| {
            dims.iter()
                .map(|&d| {
                    let v = c % d;
                    c /= d;
                    v
                })
                .collect()
        })
        .collect();
    while tuples.len() < n {
        tuples.push(dims.iter().map(|&d| rng.gen_range(0..d)).collect());
    }
    tuples.shuffle(rng);
    dims.iter()
        .enumerate()
        .map(|(i, &d)| {
            (0..d)
                .map(|v| Subset::from_indices((0..n).filter(|&w| tuples[w][i] == v)))
                .collect()
        })
        .collect()
}

fn perturb<R: Rng>(rng: &mut R, n: usize, cores: &mut [Vec<Subset>]) {
    let i = rng.gen_range(0..cores.len());
    if rng.gen_bool(0.5) && cores[i].len() >= 2 {
        let mut cells = cores[i].clone();
        cells.shuffle(rng);
        let merged = cells[0].union(cells[1]);
        let mut next: Vec<Subset> = cells[2..].to_vec();
        next.push(merged);
        cores[i] = minimal_elements(&next);
        return;
    }
    if n < 3 {
        return;
    }
    for _ in 0..20 {
        let x = Subset(rng.gen_range(1..Subset::full(n).0));
        if x.len() < 2 || x.len() == n {
            continue;
        }
        let comparable = cores[i].iter().any(|c| c.is_subset(x) || x.is_subset(*c));
        let independent = cores
            .iter()
            .enumerate()
            .all(|(j, cs)| j == i || cs.iter().all(|c| c.intersects(x)));
        if !comparable && independent {
            cores[i].push(x);
            return;
        }
    }
}

fn random_antichain<R: Rng>(rng: &mut R, within: Subset) -> Vec<Subset> {
    let members: Vec<usize> = within.iter().collect();
    let count = rng.gen_range(1..=members.len());
    let picks: Vec<Subset> = (0..count)
        .map(|_| loop {
            let s = Subset::from_indices(members.iter().copied().filter(|_| rng.gen_bool(0.5)));
            if !s.is_empty() {
                break s;
            }
        })
        .collect();
    minimal_elements(&picks)
}

/// A random antichain of nonempty subsets covering `W`.
pub fn random_covering_antichain<R: Rng>(rng: &mut R, n: usize) -> Vec<Subset> {
    let full = Subset::full(n);
    let mut cells = random_antichain(rng, full);
    let uncovered = full.difference(union_all(&cells));
    if !uncovered.is_empty() {
        cells.push(uncovered);
    }
    minimal_elements(&cells)
}

/// A random monotone frame: arbitrary generator antichains per state, no class conditions.
pub fn random_monotone_frame<R: Rng>(rng: &mut R, n: usize, k: usize) -> Result<NbhdFrame> {
    let full = Subset::full(n);
    let gens = (0..k)
        .map(|_| (0..n).map(|_| random_antichain(rng, full)).collect())
        .collect();
    NbhdFrame::new(StateSet::numbered(n)?, agent_names(k), gens)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameCondition {
    Ind,
    Nec,
    Un,
}

impl FrameCondition {
    pub fn check(self, frame: &NbhdFrame) -> CheckReport {
        match self {
            FrameCondition::Ind => frame.check_ind(),
            FrameCondition::Nec => frame.check_nec(),
            FrameCondition::Un => frame.check_un(),
        }
    }
}

/// A frame violating exactly the given condition among (ind), (nec), (un).
pub fn generate_violating_frame<R: Rng>(
    rng: &mut R,
    violated: FrameCondition,
    max_states: usize,
    max_agents: usize,
) -> Result<NbhdFrame> {
    if max_states < 2 {
        return Err(Error::Precondition("violations need at least two states".into()));
    }
    let min_agents = if violated == FrameCondition::Ind { 2 } else { 1 };
    if max_agents < min_agents {
        return Err(Error::Precondition("violating (ind) needs two agents".into()));
    }
    for _ in 0..10_000 {
        let n = rng.gen_range(2..=max_states);
        let k = rng.gen_range(min_agents..=max_agents);
        let full = Subset::full(n);
        let mut gens: Vec<Vec<Vec<Subset>>> = Vec::with_capacity(k);
        for a in 0..k {
            let per_state = match (violated, a) {
                (FrameCondition::Nec, 0) => (0..n).map(|_| random_covering_antichain(rng, n)).collect(),
                (FrameCondition::Un, 0) => {
                    let missing = rng.gen_range(0..n);
                    let cells = random_antichain(rng, full.difference(Subset::singleton(missing)));
                    vec![cells; n]
                }
                _ if violated != FrameCondition::Ind && rng.gen_bool(0.5) => vec![vec![full]; n],
                _ => vec![random_covering_antichain(rng, n); n],
            };
            gens.push(per_state);
        }
        let frame = NbhdFrame::new(StateSet::numbered(n)?, agent_names(k), gens)?;
        let exactly = [FrameCondition::Ind, FrameCondition::Nec, FrameCondition::Un]
            .into_iter()
            .all(|c| c.check(&frame).holds == (c != violated));
        if exactly {
            return Ok(frame);
        }
    }
    Err(Error::Precondition("could not generate a violating frame".into()))
}

pub fn random_valuation<R: Rng>(rng: &mut R, n: usize, atoms: &[String]) -> std::collections::BTreeMap<String, Subset> {
    atoms
        .iter()
        .map(|p| (p.clone(), Subset(rng.gen_range(0..=Subset::full(n).0))))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BtacParams {
    pub max_moments: usize,
    pub max_children: usize,
    /// Maximal number of levels (the root is level 1).
    pub max_depth: usize,
    pub agents: usize,
    pub atoms: usize,
}

/// A random tree with independent partition choices at every moment.
pub fn random_btac<R: Rng>(rng: &mut R, params: &BtacParams) -> Result<BtacModel> {
    let total = rng.gen_range(1..=params.max_moments.clamp(1, crate::btac::MAX_MOMENTS));
    let mut parent: Vec<Option<usize>> = vec![None];
    let mut level = vec![1usize];
    let mut children = vec![0usize];
    while parent.len() < total {
        let open: Vec<usize> = (0..parent.len())
            .filter(|&m| children[m] < params.max_children && level[m] < params.max_depth)
            .collect();
        let Some(&p) = open.choose(rng) else { break };
        parent.push(Some(p));
        level.push(level[p] + 1);
        children[p] += 1;
        children.push(0);
    }
    let names: Vec<String> = (1..=parent.len()).map(|i| format!("m{i}")).collect();
    let mut order = Vec::new();
    for (m, _) in parent.iter().enumerate() {
        let mut up = parent[m];
        while let Some(a) = up {
            order.push((names[a].clone(), names[m].clone()));
            up = parent[a];
        }
    }
    let frame = BtFrame::new(names, &order)?;
    let histories = frame.histories()?;
    let through: Vec<Vec<usize>> = (0..frame.len())
        .map(|m| (0..histories.len()).filter(|&h| histories[h].passes(m)).collect())
        .collect();
    let k = params.agents.max(1);
    let mut choice = vec![Vec::with_capacity(frame.len()); k];
    for hm in &through {
        let dims = random_dims(rng, hm.len(), k);
        let cells = grid_cores(rng, hm.len(), &dims);
        for (a, local) in cells.into_iter().enumerate() {
            choice[a].push(
                local
                    .into_iter()
                    .map(|c| Subset::from_indices(c.iter().map(|i| hm[i])))
                    .collect(),
            );
        }
    }
    let valuation = atom_names(params.atoms)
        .into_iter()
        .map(|p| {
            let per_moment = through
                .iter()
                .map(|hm| Subset::from_indices(hm.iter().copied().filter(|_| rng.gen_bool(0.5))))
                .collect();
            (p, per_moment)
        })
        .collect();
    BtacModel::new(frame, agent_names(k), choice, valuation)
}

// ---------------------------------------------------------------------------
// Random formulas

#[derive(Debug, Clone)]
pub struct FormulaGen {
    pub atoms: Vec<String>,
    pub agents: Vec<AgentId>,
    /// Maximal modal depth.
    pub depth: usize,
    /// Maximal number of connectives.
    pub size: usize,
    pub forall_core: bool,
    pub box_ops: bool,
}

impl FormulaGen {
    pub fn new(atoms: Vec<String>, agents: Vec<AgentId>, depth: usize) -> Self {
        FormulaGen {
            atoms,
            agents,
            depth,
            size: 6,
            forall_core: true,
            box_ops: true,
        }
    }

    pub fn generate<R: Rng>(&self, rng: &mut R) -> Formula {
        let size = rng.gen_range(0..=self.size);
        self.node(rng, self.depth, size)
    }

    fn leaf<R: Rng>(&self, rng: &mut R) -> Formula {
        match rng.gen_range(0..12) {
            0 => Formula::top(),
            1 => Formula::bottom(),
            _ => Formula::atom(self.atoms.choose(rng).expect("atoms").clone()),
        }
    }

    fn node<R: Rng>(&self, rng: &mut R, depth: usize, size: usize) -> Formula {
        if size == 0 {
            return self.leaf(rng);
        }
        let mut kinds: Vec<u8> = vec![0, 1, 2, 3, 4];
        if depth > 0 {
            kinds.extend([6, 7]);
            if self.box_ops {
                kinds.extend([5, 5]);
            }
            if self.forall_core {
                kinds.extend([8, 9]);
            }
        }
        let kind = *kinds.choose(rng).expect("nonempty");
        let pick_agent = |rng: &mut R| self.agents.choose(rng).expect("agents").clone();
        let binary = |rng: &mut R| {
            let left = rng.gen_range(0..size);
            (self.node(rng, depth, left), self.node(rng, depth, size - 1 - left))
        };
        match kind {
            0 => Formula::not(self.node(rng, depth, size - 1)),
            1 => {
                let (a, b) = binary(rng);
                Formula::or(a, b)
            }
            2 => {
                let (a, b) = binary(rng);
                Formula::and(a, b)
            }
            3 => {
                let (a, b) = binary(rng);
                Formula::implies(a, b)
            }
            4 => {
                let (a, b) = binary(rng);
                Formula::iff(a, b)
            }
            5 => {
                let inner = self.node(rng, depth - 1, size - 1);
                if rng.gen_bool(0.5) {
                    Formula::nec(inner)
                } else {
                    Formula::poss(inner)
                }
            }
            6 => {
                let i = pick_agent(rng);
                Formula::ability(&i, self.node(rng, depth - 1, size - 1))
            }
            7 => {
                let i = pick_agent(rng);
                Formula::AbilityDual(i, Box::new(self.node(rng, depth - 1, size - 1)))
            }
            8 => {
                let i = pick_agent(rng);
                Formula::forall_core(&i, self.node(rng, depth - 1, size - 1))
            }
            _ => {
                let i = pick_agent(rng);
                Formula::forall_core_dual(&i, self.node(rng, depth - 1, size - 1))
            }
        }
    }
}

/// Random instance of a schema over the given atoms and agents.
pub fn random_instance<R: Rng>(rng: &mut R, schema: AxiomSchema, gen: &FormulaGen) -> Formula {
    let agents: Vec<AgentId> = match schema.agent_arity() {
        Some(n) => (0..n).map(|_| gen.agents.choose(rng).expect("agents").clone()).collect(),
        None => {
            let mut all = gen.agents.clone();
            all.shuffle(rng);
            let k = rng.gen_range(1..=all.len());
            all.truncate(k);
            all
        }
    };
    let slots = schema.formula_arity().unwrap_or(agents.len());
    let formulas: Vec<Formula> = (0..slots).map(|_| gen.generate(rng)).collect();
    instantiate(schema, &formulas, &agents).expect("arities match by construction")
}

// ---------------------------------------------------------------------------
// Soundness fuzzing

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameClass {
    ClassC,
    /// Generator invariants only (monotone, `W ∈ N`, `∅ ∉ N`).
    Monotone,
}

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub models: usize,
    pub max_states: usize,
    pub max_agents: usize,
    pub max_atoms: usize,
    pub schemas: Vec<AxiomSchema>,
    pub seed: u64,
    pub instances_per_schema: usize,
    pub formula_depth: usize,
    pub frame_class: FrameClass,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig {
            models: 500,
            max_states: 5,
            max_agents: 3,
            max_atoms: 3,
            schemas: AxiomSchema::ALL.to_vec(),
            seed: 0,
            instances_per_schema: 4,
            formula_depth: 2,
            frame_class: FrameClass::ClassC,
        }
    }
}

/// A model and state at which `formula` is false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Countermodel {
    pub model: NbhdModel,
    pub state: String,
    pub formula: Formula,
}

impl Countermodel {
    /// The model file of the countermodel, extended with `state` and `formula`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut value = serde_json::to_value(self.model.to_file()).expect("model files serialize");
        let obj = value.as_object_mut().expect("model file is an object");
        obj.insert("state".into(), self.state.clone().into());
        obj.insert("formula".into(), self.formula.to_string().into());
        value
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FuzzStats {
    pub models: usize,
    pub instances: usize,
    pub states_explored: u64,
}

#[derive(Debug, Clone)]
pub struct FuzzOutcome {
    pub report: CheckReport,
    pub stats: FuzzStats,
    pub counterexample: Option<Countermodel>,
}

/// One random model of the configured class, from its own RNG stream.
pub fn fuzz_model(config: &FuzzConfig, index: usize) -> Result<(NbhdModel, FormulaGen)> {
    let mut rng = rng_for(config.seed, index as u64 + 1);
    let n = rng.gen_range(1..=config.max_states.max(1));
    let k = rng.gen_range(1..=config.max_agents.max(1));
    let atoms = atom_names(rng.gen_range(1..=config.max_atoms.max(1)));
    let frame = match config.frame_class {
        FrameClass::ClassC => {
            let style = if rng.gen_bool(0.5) { FrameStyle::Grid } else { FrameStyle::Perturbed };
            random_class_c_frame(&mut rng, n, k, style, None)?
        }
        FrameClass::Monotone => random_monotone_frame(&mut rng, n, k)?,
    };
    let valuation = random_valuation(&mut rng, n, &atoms);
    let mut gen = FormulaGen::new(atoms, frame.agents().to_vec(), config.formula_depth);
    gen.size = 4;
    Ok((NbhdModel::new(frame, valuation)?, gen))
}

/// Instantiates every configured schema on random models and checks validity.
pub fn soundness_fuzz(config: &FuzzConfig) -> Result<FuzzOutcome> {
    let mut stats = FuzzStats {
        models: 0,
        instances: 0,
        states_explored: 0,
    };
    for index in 0..config.models {
        let (model, gen) = fuzz_model(config, index)?;
        let mut rng = rng_for(config.seed ^ 0x5eed, index as u64 + 1);
        stats.models += 1;
        let full = model.frame.full();
        for &schema in &config.schemas {
            for _ in 0..config.instances_per_schema {
                let instance = random_instance(&mut rng, schema, &gen);
                let ext = Program::compile(&instance)?.extension(&model)?;
                stats.instances += 1;
                stats.states_explored += model.frame.len() as u64;
                if ext != full {
                    let w = full.difference(ext).iter().next().expect("nonempty");
                    let state = model.frame.states().name(w).to_string();
                    let report = CheckReport::fail(
                        "soundness",
                        Witness {
                            states: vec![state.clone()],
                            detail: format!("{schema} instance `{instance}` fails in model #{index}"),
                            ..Witness::default()
                        },
                    );
                    return Ok(FuzzOutcome {
                        report,
                        stats,
                        counterexample: Some(Countermodel {
                            model,
                            state,
                            formula: instance,
                        }),
                    });
                }
            }
        }
    }
    let report = CheckReport::pass("soundness").with_note(format!(
        "{} instances on {} models",
        stats.instances, stats.models
    ));
    Ok(FuzzOutcome {
        report,
        stats,
        counterexample: None,
    })
}

// ---------------------------------------------------------------------------
// Falsifying valuations

/// A valuation on a frame together with an axiom instance false at `state`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Falsification {
    pub model: NbhdModel,
    pub instance: Formula,
    pub state: String,
}

fn single_valuation(pairs: &[(&str, Subset)]) -> std::collections::BTreeMap<String, Subset> {
    pairs.iter().map(|(p, s)| (p.to_string(), *s)).collect()
}

fn witness_of(report: CheckReport, condition: &str) -> Result<Witness> {
    if report.holds {
        return Err(Error::Precondition(format!("frame satisfies ({condition})")));
    }
    Ok(report.witness.expect("failing report carries a witness"))
}

/// From `X ∈ N_a(w)`, `Y ∈ N_b(w)` with `X ∩ Y = ∅`: `V(p) = X`, `V(q) = Y`
/// falsifies `[a]p & [b]q -> dia (p & q)` at `w`.
pub fn falsify_ind(frame: &NbhdFrame) -> Result<Falsification> {
    let w = witness_of(frame.check_ind(), "ind")?;
    let st = frame.states();
    let (x, y) = (st.subset(&w.sets[0])?, st.subset(&w.sets[1])?);
    let instance = instantiate(
        AxiomSchema::Ind,
        &[Formula::atom("p"), Formula::atom("q")],
        &[w.agents[0].clone(), w.agents[1].clone()],
    )?;
    Ok(Falsification {
        model: NbhdModel::new(frame.clone(), single_valuation(&[("p", x), ("q", y)]))?,
        instance,
        state: w.states[0].clone(),
    })
}

/// From `X ∈ N_i(w) \ N_i(w')`: `V(p) = X` falsifies `[i]p -> box [i]p` at `w`.
pub fn falsify_nec(frame: &NbhdFrame) -> Result<Falsification> {
    let w = witness_of(frame.check_nec(), "nec")?;
    let x = frame.states().subset(&w.sets[0])?;
    let instance = instantiate(AxiomSchema::NecA, &[Formula::atom("p")], &[w.agents[0].clone()])?;
    Ok(Falsification {
        model: NbhdModel::new(frame.clone(), single_valuation(&[("p", x)]))?,
        instance,
        state: w.states[0].clone(),
    })
}

/// From a core of `i` at `w` not covering `W`: `V(p) = ⋃ core_i(w)`
/// falsifies `box p <-> [E:i] p` at `w`.
pub fn falsify_un(frame: &NbhdFrame) -> Result<Falsification> {
    let w = witness_of(frame.check_un(), "un")?;
    let a = frame.agent_index(&w.agents[0])?;
    let state = frame.states().index_of(&w.states[0])?;
    let covered = frame.core_union(a, state);
    let instance = instantiate(AxiomSchema::Pos, &[Formula::atom("p")], &[w.agents[0].clone()])?;
    Ok(Falsification {
        model: NbhdModel::new(frame.clone(), single_valuation(&[("p", covered)]))?,
        instance,
        state: w.states[0].clone(),
    })
}

pub fn falsify(frame: &NbhdFrame, condition: FrameCondition) -> Result<Falsification> {
    match condition {
        FrameCondition::Ind => falsify_ind(frame),
        FrameCondition::Nec => falsify_nec(frame),
        FrameCondition::Un => falsify_un(frame),
    }
}

// ---------------------------------------------------------------------------
// Bounded validity search

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBounds {
    pub max_states: usize,
    pub agent_count: usize,
    pub atom_count: usize,
    pub max_seconds: f64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_states: 5,
            agent_count: 2,
            atom_count: 3,
            max_seconds: 120.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    ValidUpToBound,
    Countermodel(Box<Countermodel>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    pub models_explored: u64,
    pub states_explored: u64,
    pub elapsed: Duration,
}

/// All antichains of nonempty subsets of an `n`-set whose union is the
/// whole set, ordered by number of cells and then lexicographically.
pub fn covering_antichains(n: usize) -> Vec<Vec<Subset>> {
    let full = Subset::full(n);
    let subsets: Vec<Subset> = (1..=full.0).map(Subset).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(subsets: &[Subset], start: usize, current: &mut Vec<Subset>, full: Subset, out: &mut Vec<Vec<Subset>>) {
        if !current.is_empty() && union_all(current) == full {
            out.push(current.clone());
        }
        for k in start..subsets.len() {
            let s = subsets[k];
            if current.iter().all(|c| !c.is_subset(s) && !s.is_subset(*c)) {
                current.push(s);
                rec(subsets, k + 1, current, full, out);
                current.pop();
            }
        }
    }
    rec(&subsets, 0, &mut current, full, &mut out);
    for a in &mut out {
        a.sort_by(Subset::canonical_cmp);
    }
    out.sort_by(|x, y| {
        x.len().cmp(&y.len()).then_with(|| {
            x.iter()
                .zip(y.iter())
                .map(|(a, b)| a.canonical_cmp(b))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn sorted_masks(a: &[Subset]) -> Vec<u64> {
    let mut v: Vec<u64> = a.iter().map(|s| s.0).collect();
    v.sort_unstable();
    v
}

/// Whether `a` is the least member of its orbit under state permutations.
fn is_canonical(a: &[Subset], perms: &[Vec<usize>]) -> bool {
    let own = sorted_masks(a);
    perms.iter().all(|p| {
        let mapped: Vec<Subset> = a
            .iter()
            .map(|s| Subset::from_indices(s.iter().map(|i| p[i])))
            .collect();
        own <= sorted_masks(&mapped)
    })
}

/// Searches all class-C models up to the bounds for a state falsifying `f`.
///
/// Frames are enumerated by increasing size; each agent gets a uniform
/// covering antichain, filtered pairwise by (ind). The first agent's
/// antichain is taken up to state permutation.
pub fn validity_search(f: &Formula, bounds: &SearchBounds) -> Result<SearchReport> {
    if !f.is_osstit_pure() {
        return Err(Error::UnsupportedOperator("validity search takes strategic formulas only".into()));
    }
    if bounds.max_states == 0 || bounds.agent_count == 0 || bounds.max_states > 8 {
        return Err(Error::Precondition("need 1..=8 states and at least one agent".into()));
    }
    let vars: Vec<String> = f.vars().into_iter().collect();
    if vars.len() > bounds.atom_count {
        return Err(Error::Precondition(format!(
            "formula has {} atoms, bound allows {}",
            vars.len(),
            bounds.atom_count
        )));
    }
    let mut agents: Vec<AgentId> = f.agents().into_iter().collect();
    if agents.len() > bounds.agent_count {
        return Err(Error::Precondition(format!(
            "formula mentions {} agents, bound allows {}",
            agents.len(),
            bounds.agent_count
        )));
    }
    for name in agent_names(bounds.agent_count + agents.len()) {
        if agents.len() == bounds.agent_count {
            break;
        }
        if !agents.contains(&name) {
            agents.push(name);
        }
    }
    let program = Program::compile(f)?;
    let start = Instant::now();
    let limit = Duration::from_secs_f64(bounds.max_seconds.max(0.0));
    let mut models_explored = 0u64;
    let mut states_explored = 0u64;
    let done = |outcome, models_explored, states_explored| {
        Ok(SearchReport {
            outcome,
            models_explored,
            states_explored,
            elapsed: start.elapsed(),
        })
    };
    for n in 1..=bounds.max_states {
        let all = covering_antichains(n);
        let perms = permutations(n);
        let first: Vec<&Vec<Subset>> = all.iter().filter(|a| is_canonical(a, &perms)).collect();
        let states = StateSet::numbered(n)?;
        let mut choice: Vec<&Vec<Subset>> = Vec::with_capacity(agents.len());
        let mut stack: Vec<usize> = vec![0];
        // Odometer over (first agent's canonical antichain, other agents' antichains).
        while let Some(&pos) = stack.last() {
            let depth = stack.len() - 1;
            let pool: &[&Vec<Subset>] = if depth == 0 { &first } else { &[] };
            let candidate = if depth == 0 { pool.get(pos).copied() } else { all.get(pos) };
            let Some(candidate) = candidate else {
                stack.pop();
                choice.pop();
                if let Some(last) = stack.last_mut() {
                    *last += 1;
                }
                continue;
            };
            let independent = choice.iter().all(|other| {
                candidate.iter().all(|x| other.iter().all(|y| x.intersects(*y)))
            });
            choice.truncate(depth);
            if !independent {
                *stack.last_mut().expect("nonempty") += 1;
                continue;
            }
            choice.push(candidate);
            if choice.len() < agents.len() {
                stack.push(0);
                continue;
            }
            let frame = NbhdFrame::uniform(
                states.clone(),
                agents.clone(),
                choice.iter().map(|c| (*c).clone()).collect(),
            )?;
            let mut model = NbhdModel::new(frame, Default::default())?;
            let bound = program.bind(&model)?;
            let full = model.frame.full();
            let per_atom = 1u64 << n;
            let total = per_atom.pow(vars.len() as u32);
            for code in 0..total {
                let mut c = code;
                for p in &vars {
                    model.valuation.insert(p.clone(), Subset(c % per_atom));
                    c /= per_atom;
                }
                models_explored += 1;
                states_explored += n as u64;
                let ext = program.run(&model, &bound, &[full]);
                if ext != full {
                    let w = full.difference(ext).iter().next().expect("nonempty");
                    let state = model.frame.states().name(w).to_string();
                    return done(
                        SearchOutcome::Countermodel(Box::new(Countermodel {
                            model,
                            state,
                            formula: f.clone(),
                        })),
                        models_explored,
                        states_explored,
                    );
                }
                if models_explored.is_multiple_of(4096) && start.elapsed() > limit {
                    return Err(Error::Timeout {
                        explored: models_explored,
                    });
                }
            }
            choice.pop();
            *stack.last_mut().expect("nonempty") += 1;
        }
    }
    done(SearchOutcome::ValidUpToBound, models_explored, states_explored)
}

// ---------------------------------------------------------------------------
// Rules

fn valid_on(sample: &[NbhdModel], f: &Formula) -> Result<bool> {
    let program = Program::compile(f)?;
    for m in sample {
        if program.extension(m)? != m.frame.full() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Semantic counterparts of (RE) and (MP) on a sample of fuzzed models:
/// whenever the premises are valid on the whole sample, so is the conclusion.
pub fn derivability_smoke(config: &FuzzConfig, trials: usize) -> Result<CheckReport> {
    let sample = (0..config.models)
        .map(|i| fuzz_model(config, i).map(|(m, _)| m))
        .collect::<Result<Vec<_>>>()?;
    let atoms = atom_names(config.max_atoms.max(1));
    let agent = agent_names(1).remove(0);
    let gen = FormulaGen::new(atoms, vec![agent.clone()], config.formula_depth);
    let schemas = &config.schemas;
    let mut rng = rng_for(config.seed, u64::MAX);
    let (mut re_cases, mut mp_cases) = (0usize, 0usize);
    for _ in 0..trials {
        let phi = gen.generate(&mut rng);
        let psi = match rng.gen_range(0..5) {
            0 => Formula::not(Formula::not(phi.clone())),
            1 => Formula::or(phi.clone(), phi.clone()),
            2 => Formula::and(phi.clone(), Formula::top()),
            3 => Formula::or(Formula::bottom(), phi.clone()),
            _ => gen.generate(&mut rng),
        };
        if valid_on(&sample, &Formula::iff(phi.clone(), psi.clone()))? {
            re_cases += 1;
            let conclusion = Formula::iff(Formula::ability(&agent, phi.clone()), Formula::ability(&agent, psi.clone()));
            if !valid_on(&sample, &conclusion)? {
                return Ok(CheckReport::fail(
                    "derivability",
                    Witness::detail(format!("RE: `{phi}` ≡ `{psi}` valid but `{conclusion}` is not")),
                ));
            }
        }
        if let Some(&schema) = schemas.choose(&mut rng) {
            let premise = random_instance(&mut rng, schema, &gen);
            let chi = if rng.gen_bool(0.5) {
                Formula::or(premise.clone(), gen.generate(&mut rng))
            } else {
                gen.generate(&mut rng)
            };
            let bridge = Formula::implies(premise.clone(), chi.clone());
            if valid_on(&sample, &premise)? && valid_on(&sample, &bridge)? {
                mp_cases += 1;
                if !valid_on(&sample, &chi)? {
                    return Ok(CheckReport::fail(
                        "derivability",
                        Witness::detail(format!("MP: `{premise}` and `{bridge}` valid but `{chi}` is not")),
                    ));
                }
            }
        }
    }
    Ok(CheckReport::pass("derivability")
        .with_note(format!("RE applied {re_cases} times"))
        .with_note(format!("MP applied {mp_cases} times")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::eval;
    use crate::syntax::{parse, render};
    use serde_json::json;

    fn ag(s: &str) -> AgentId {
        AgentId::new(s).unwrap()
    }

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn instantiate_examples() {
        assert_eq!(render(&instantiate(AxiomSchema::D, &[], &[ag("a")]).unwrap()), "~[a] false");
        assert_eq!(
            instantiate(AxiomSchema::Ind, &[f("p"), f("q")], &[ag("a"), ag("b")]).unwrap(),
            f("[a]p & [b]q -> dia (p & q)")
        );
        assert_eq!(
            instantiate(AxiomSchema::Pos, &[f("p")], &[ag("a")]).unwrap(),
            f("box p <-> [E:a] p")
        );
        assert!(matches!(
            instantiate(AxiomSchema::M, &[f("p")], &[ag("a")]),
            Err(Error::Arity(_))
        ));
        assert!(instantiate(AxiomSchema::Ind, &[f("p"), f("q")], &[ag("a"), ag("a")]).is_err());
        assert!(instantiate(AxiomSchema::Ind, &[f("p")], &[ag("a")]).is_ok());
    }

    #[test]
    fn schema_names_parse() {
        assert_eq!("nec-a".parse::<AxiomSchema>().unwrap(), AxiomSchema::NecA);
        assert_eq!("NecA".parse::<AxiomSchema>().unwrap(), AxiomSchema::NecA);
        assert_eq!(parse_schema_list("N,D, M").unwrap(), vec![AxiomSchema::N, AxiomSchema::D, AxiomSchema::M]);
        assert_eq!(parse_schema_list("all").unwrap().len(), 14);
        assert!("X".parse::<AxiomSchema>().is_err());
    }

    #[test]
    fn grid_frame_two_by_two() {
        let frame = generate_frame(&FrameParams {
            states: 4,
            agents: 2,
            seed: 7,
            style: FrameStyle::Grid,
            cells: Some(vec![2, 2]),
        })
        .unwrap();
        assert_eq!(frame.len(), 4);
        for a in 0..2 {
            let core = frame.gens_at(a, 0);
            assert_eq!(core.len(), 2);
            assert!(core.iter().all(|c| c.len() == 2));
        }
        assert!(frame.is_class_c().holds);
        assert!(frame.is_class_p().holds);
    }

    #[test]
    fn infeasible_grid_is_rejected() {
        let r = generate_frame(&FrameParams {
            states: 3,
            agents: 2,
            seed: 0,
            style: FrameStyle::Grid,
            cells: Some(vec![2, 2]),
        });
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn single_agent_partitions_are_class_c() {
        for seed in 0..20 {
            let frame = generate_frame(&FrameParams {
                states: 5,
                agents: 1,
                seed,
                style: FrameStyle::Grid,
                cells: None,
            })
            .unwrap();
            assert!(frame.is_class_c().holds);
        }
    }

    #[test]
    fn perturbed_frames_stay_in_class_c_and_can_leave_class_p() {
        let mut outside_p = 0;
        for seed in 0..200 {
            let frame = generate_frame(&FrameParams {
                states: 5,
                agents: 2,
                seed,
                style: FrameStyle::Perturbed,
                cells: None,
            })
            .unwrap();
            assert!(frame.is_class_c().holds);
            if !frame.check_partition_cores().holds {
                outside_p += 1;
            }
        }
        assert!(outside_p > 0);
    }

    #[test]
    fn random_btac_models_are_valid() {
        let mut rng = rng_for(9, 0);
        let params = BtacParams {
            max_moments: 12,
            max_children: 4,
            max_depth: 4,
            agents: 2,
            atoms: 2,
        };
        for _ in 0..50 {
            let model = random_btac(&mut rng, &params).unwrap();
            assert!(model.frame().len() <= 12);
            let report = crate::btac::validate_btac(&model);
            assert!(report.holds, "{report:?}");
        }
    }

    #[test]
    fn falsify_ind_example() {
        let frame = NbhdModel::from_json_str(
            &json!({
                "states": ["w1", "w2"], "agents": ["a", "b"],
                "choice": { "a": { "uniform": [["w1"], ["w2"]] }, "b": { "uniform": [["w1"], ["w2"]] } }
            })
            .to_string(),
        )
        .unwrap()
        .frame;
        let fx = falsify_ind(&frame).unwrap();
        let st = frame.states();
        assert_eq!(fx.model.value("p"), st.subset(&["w1"]).unwrap());
        assert_eq!(fx.model.value("q"), st.subset(&["w2"]).unwrap());
        assert_eq!(fx.state, "w1");
        assert_eq!(fx.instance, f("[a]p & [b]q -> dia (p & q)"));
        assert!(!eval(&fx.model, &fx.state, &fx.instance).unwrap());
    }

    #[test]
    fn falsify_nec_on_f1() {
        let (f1, _, _) = crate::morphism::fixture_theorem3();
        let fx = falsify_nec(&f1).unwrap();
        assert_eq!(fx.model.value("p"), f1.states().subset(&["w1", "w2"]).unwrap());
        assert_eq!(fx.instance, f("[a]p -> box [a]p"));
        assert_eq!(fx.state, "w1");
        assert!(!eval(&fx.model, "w1", &fx.instance).unwrap());
    }

    #[test]
    fn falsify_un_example() {
        let frame = NbhdModel::from_json_str(
            &json!({
                "states": ["w1", "w2", "w3"], "agents": ["a"],
                "choice": { "a": { "uniform": [["w1", "w2"]] } }
            })
            .to_string(),
        )
        .unwrap()
        .frame;
        let fx = falsify_un(&frame).unwrap();
        assert_eq!(fx.model.value("p"), frame.states().subset(&["w1", "w2"]).unwrap());
        assert_eq!(fx.state, "w1");
        assert!(!eval(&fx.model, "w1", &fx.instance).unwrap());
    }

    #[test]
    fn falsify_requires_a_violation() {
        let frame = generate_frame(&FrameParams {
            states: 4,
            agents: 2,
            seed: 1,
            style: FrameStyle::Grid,
            cells: Some(vec![2, 2]),
        })
        .unwrap();
        assert!(matches!(falsify_ind(&frame), Err(Error::Precondition(_))));
        assert!(matches!(falsify_nec(&frame), Err(Error::Precondition(_))));
        assert!(matches!(falsify_un(&frame), Err(Error::Precondition(_))));
    }

    #[test]
    fn violating_frames_violate_exactly_one_condition() {
        let mut rng = rng_for(3, 0);
        for cond in [FrameCondition::Ind, FrameCondition::Nec, FrameCondition::Un] {
            for _ in 0..20 {
                let frame = generate_violating_frame(&mut rng, cond, 5, 3).unwrap();
                assert!(!cond.check(&frame).holds);
            }
        }
    }

    #[test]
    fn covering_antichain_counts() {
        // Brute force over all families of nonempty subsets.
        for n in 1..=3 {
            let full = Subset::full(n);
            let subsets: Vec<Subset> = (1..=full.0).map(Subset).collect();
            let mut count = 0;
            for fam in 1u32..(1 << subsets.len()) {
                let members: Vec<Subset> = (0..subsets.len()).filter(|i| fam >> i & 1 == 1).map(|i| subsets[i]).collect();
                if crate::nbhd::is_antichain(&members) && union_all(&members) == full {
                    count += 1;
                }
            }
            assert_eq!(covering_antichains(n).len(), count, "n = {n}");
        }
    }

    #[test]
    fn validity_search_examples() {
        let bounds = SearchBounds {
            max_states: 3,
            agent_count: 1,
            atom_count: 2,
            max_seconds: 30.0,
        };
        let r = validity_search(&f("[a] true"), &bounds).unwrap();
        assert_eq!(r.outcome, SearchOutcome::ValidUpToBound);
        let r = validity_search(&f("box p -> [a] p"), &bounds).unwrap();
        assert_eq!(r.outcome, SearchOutcome::ValidUpToBound);
        match validity_search(&f("[a] p -> p"), &bounds).unwrap().outcome {
            SearchOutcome::Countermodel(c) => {
                assert_eq!(c.model.frame.len(), 2);
                assert!(!eval(&c.model, &c.state, &c.formula).unwrap());
            }
            other => panic!("expected a countermodel, got {other:?}"),
        }
    }

    #[test]
    fn validity_search_rejects_too_many_agents() {
        let bounds = SearchBounds {
            max_states: 2,
            agent_count: 1,
            atom_count: 2,
            max_seconds: 5.0,
        };
        assert!(validity_search(&f("[a] p -> [b] p"), &bounds).is_err());
        assert!(validity_search(&f("[stit:a] p"), &bounds).is_err());
    }

    #[test]
    fn soundness_on_monotone_frames_for_monotone_schemas() {
        let config = FuzzConfig {
            models: 60,
            schemas: vec![AxiomSchema::N, AxiomSchema::D, AxiomSchema::M],
            frame_class: FrameClass::Monotone,
            seed: 11,
            ..FuzzConfig::default()
        };
        assert!(soundness_fuzz(&config).unwrap().report.holds);
    }

    #[test]
    fn monotone_frames_break_ind_eventually() {
        let config = FuzzConfig {
            models: 200,
            schemas: vec![AxiomSchema::Ind, AxiomSchema::NecA, AxiomSchema::Pos],
            frame_class: FrameClass::Monotone,
            seed: 5,
            ..FuzzConfig::default()
        };
        let out = soundness_fuzz(&config).unwrap();
        assert!(!out.report.holds);
        let cm = out.counterexample.unwrap();
        assert!(!eval(&cm.model, &cm.state, &cm.formula).unwrap());
    }

    #[test]
    fn derivability_smoke_holds() {
        let config = FuzzConfig {
            models: 30,
            seed: 2,
            ..FuzzConfig::default()
        };
        let r = derivability_smoke(&config, 200).unwrap();
        assert!(r.holds, "{r:?}");
    }
}
