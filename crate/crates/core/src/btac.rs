//! Finite branching-time frames with agents and choices, and the classical
//! stit semantics evaluated at moment/history indices.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nbhd::Subset;
use crate::report::{CheckReport, Witness};
use crate::syntax::{AgentId, Formula};

/// Moments are bitmask-indexed, like neighbourhood states.
pub const MAX_MOMENTS: usize = 64;

/// A finite set of moments with a strict order `<` (as given; see [`BtFrame::check`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BtFrame {
    moments: Vec<String>,
    /// `below[m]` = moments strictly earlier than `m`.
    below: Vec<Subset>,
}

impl BtFrame {
    pub fn new(moments: Vec<String>, order: &[(String, String)]) -> Result<Self> {
        if moments.is_empty() {
            return Err(Error::InvalidFrame("a tree needs at least one moment".into()));
        }
        if moments.len() > MAX_MOMENTS {
            return Err(Error::InvalidFrame(format!("more than {MAX_MOMENTS} moments")));
        }
        for (i, m) in moments.iter().enumerate() {
            if moments[..i].contains(m) {
                return Err(Error::InvalidFrame(format!("duplicate moment `{m}`")));
            }
        }
        let mut below = vec![Subset::EMPTY; moments.len()];
        let find = |m: &str| {
            moments
                .iter()
                .position(|x| x == m)
                .ok_or_else(|| Error::UnknownMoment(m.to_string()))
        };
        for (lo, hi) in order {
            let (lo, hi) = (find(lo)?, find(hi)?);
            below[hi] = below[hi].union(Subset::singleton(lo));
        }
        Ok(BtFrame { moments, below })
    }

    pub fn moments(&self) -> &[String] {
        &self.moments
    }

    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    pub fn moment_index(&self, name: &str) -> Result<usize> {
        self.moments
            .iter()
            .position(|m| m == name)
            .ok_or_else(|| Error::UnknownMoment(name.to_string()))
    }

    /// `lo < hi`.
    pub fn less(&self, lo: usize, hi: usize) -> bool {
        self.below[hi].contains(lo)
    }

    pub fn order_pairs(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for hi in 0..self.len() {
            for lo in self.below[hi].iter() {
                out.push((self.moments[lo].clone(), self.moments[hi].clone()));
            }
        }
        out
    }

    /// Irreflexivity, transitivity and backward linearity.
    pub fn check(&self) -> CheckReport {
        let name = |m: usize| self.moments[m].clone();
        let n = self.len();
        for m in 0..n {
            if self.less(m, m) {
                return CheckReport::fail(
                    "irreflexive",
                    Witness {
                        states: vec![name(m)],
                        ..Witness::detail("moment precedes itself")
                    },
                );
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !self.less(a, b) {
                    continue;
                }
                for c in 0..n {
                    if self.less(b, c) && !self.less(a, c) {
                        return CheckReport::fail(
                            "transitive",
                            Witness {
                                states: vec![name(a), name(b), name(c)],
                                ..Witness::detail("a < b and b < c but not a < c")
                            },
                        );
                    }
                }
            }
        }
        for m in 0..n {
            for a in self.below[m].iter() {
                for b in self.below[m].iter() {
                    if a != b && !self.less(a, b) && !self.less(b, a) {
                        return CheckReport::fail(
                            "backward linearity",
                            Witness {
                                states: vec![name(m), name(a), name(b)],
                                ..Witness::detail("incomparable moments below the first moment")
                            },
                        );
                    }
                }
            }
        }
        CheckReport::pass("bt frame")
    }

    /// All histories (maximal chains). In a finite backward-linear order the
    /// down-set of each maximal moment is a chain, and these down-sets are
    /// exactly the maximal chains.
    pub fn histories(&self) -> Result<Vec<History>> {
        let report = self.check();
        if !report.holds {
            return Err(Error::InvalidFrame(format!(
                "{} violated: {}",
                report.label,
                report.witness.map(|w| w.states.join(", ")).unwrap_or_default()
            )));
        }
        let n = self.len();
        let histories: Vec<History> = (0..n)
            .filter(|&m| (0..n).all(|k| !self.less(m, k)))
            .map(|leaf| History {
                leaf,
                moments: self.below[leaf].union(Subset::singleton(leaf)),
            })
            .collect();
        debug_assert!(histories.iter().all(|h| self.is_maximal_chain(h.moments)));
        Ok(histories)
    }

    pub fn is_chain(&self, set: Subset) -> bool {
        set.iter()
            .all(|a| set.iter().all(|b| a == b || self.less(a, b) || self.less(b, a)))
    }

    pub fn is_maximal_chain(&self, set: Subset) -> bool {
        self.is_chain(set)
            && (0..self.len())
                .filter(|m| !set.contains(*m))
                .all(|m| !self.is_chain(set.union(Subset::singleton(m))))
    }

    pub fn history_id(&self, h: &History) -> String {
        format!("h_{}", self.moments[h.leaf])
    }
}

/// A maximal chain, named after its last moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct History {
    pub leaf: usize,
    pub moments: Subset,
}

impl History {
    pub fn passes(&self, moment: usize) -> bool {
        self.moments.contains(moment)
    }
}

/// A moment/history pair with the history passing through the moment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Index {
    pub moment: usize,
    pub history: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BtacModel {
    frame: BtFrame,
    histories: Vec<History>,
    agents: Vec<AgentId>,
    /// `choice[agent][moment]`: cells as bitmasks over history indices.
    choice: Vec<Vec<Vec<Subset>>>,
    /// `valuation[atom][moment]`: histories `h` with `m/h` in the atom's extension.
    valuation: BTreeMap<String, Vec<Subset>>,
}

impl BtacModel {
    /// Assembles a model over a valid tree. Choices are stored as given;
    /// partition and independence conditions are checked by [`validate_btac`].
    pub fn new(
        frame: BtFrame,
        agents: Vec<AgentId>,
        choice: Vec<Vec<Vec<Subset>>>,
        valuation: BTreeMap<String, Vec<Subset>>,
    ) -> Result<Self> {
        let histories = frame.histories()?;
        if agents.is_empty() {
            return Err(Error::InvalidModel("agent set must be nonempty".into()));
        }
        if histories.len() > 64 {
            return Err(Error::InvalidModel("more than 64 histories".into()));
        }
        if choice.len() != agents.len() || choice.iter().any(|c| c.len() != frame.len()) {
            return Err(Error::InvalidModel("choice table must cover every agent and moment".into()));
        }
        let all = Subset::full(histories.len());
        if choice.iter().flatten().flatten().any(|c| !c.is_subset(all)) {
            return Err(Error::InvalidModel("choice cell refers to an unknown history".into()));
        }
        for (p, per_moment) in &valuation {
            if per_moment.len() != frame.len() {
                return Err(Error::InvalidModel(format!("valuation of `{p}` must cover every moment")));
            }
            for (m, hs) in per_moment.iter().enumerate() {
                if hs.iter().any(|h| !histories[h].passes(m)) {
                    return Err(Error::InvalidModel(format!(
                        "valuation of `{p}` contains an index whose history misses moment `{}`",
                        frame.moments[m]
                    )));
                }
            }
        }
        Ok(BtacModel {
            frame,
            histories,
            agents,
            choice,
            valuation,
        })
    }

    pub fn frame(&self) -> &BtFrame {
        &self.frame
    }

    pub fn histories(&self) -> &[History] {
        &self.histories
    }

    pub fn agents(&self) -> &[AgentId] {
        &self.agents
    }

    pub fn agent_index(&self, agent: &AgentId) -> Result<usize> {
        self.agents
            .iter()
            .position(|a| a == agent)
            .ok_or_else(|| Error::UnknownAgent(agent.to_string()))
    }

    pub fn choice_at(&self, agent: usize, moment: usize) -> &[Subset] {
        &self.choice[agent][moment]
    }

    pub fn valuation(&self) -> &BTreeMap<String, Vec<Subset>> {
        &self.valuation
    }

    /// `H_m` as a bitmask over history indices.
    pub fn through(&self, moment: usize) -> Subset {
        Subset::from_indices((0..self.histories.len()).filter(|&h| self.histories[h].passes(moment)))
    }

    pub fn history_id(&self, h: usize) -> String {
        self.frame.history_id(&self.histories[h])
    }

    pub fn history_index(&self, id: &str) -> Result<usize> {
        (0..self.histories.len())
            .find(|&h| self.history_id(h) == id)
            .ok_or_else(|| Error::UnknownHistory(id.to_string()))
    }

    /// All indices `m/h`, ordered by moment then history.
    pub fn indices(&self) -> Vec<Index> {
        (0..self.frame.len())
            .flat_map(|m| self.through(m).iter().map(move |h| Index { moment: m, history: h }))
            .collect()
    }

    pub fn index(&self, moment: &str, history: &str) -> Result<Index> {
        let m = self.frame.moment_index(moment)?;
        let h = self.history_index(history)?;
        if !self.histories[h].passes(m) {
            return Err(Error::Precondition(format!("history `{history}` does not pass through `{moment}`")));
        }
        Ok(Index { moment: m, history: h })
    }

    /// Parses `moment/historyId`.
    pub fn parse_index(&self, text: &str) -> Result<Index> {
        let (m, h) = text
            .split_once('/')
            .ok_or_else(|| Error::Format(format!("index `{text}` is not of the form moment/history")))?;
        self.index(m, h)
    }

    pub fn index_name(&self, idx: Index) -> String {
        format!("{}/{}", self.frame.moments[idx.moment], self.history_id(idx.history))
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: BtacFile = serde_json::from_str(text)?;
        file.into_model()
    }

    pub fn to_file(&self) -> BtacFile {
        BtacFile::from_model(self)
    }
}

/// Histories through the named moment.
pub fn histories_through(frame: &BtFrame, moment: &str) -> Result<Vec<History>> {
    let m = frame.moment_index(moment)?;
    Ok(frame.histories()?.into_iter().filter(|h| h.passes(m)).collect())
}

/// Histories `h ∈ H_m` such that `m/h` satisfies `f` (a classical formula).
pub fn extension_at(model: &BtacModel, moment: usize, f: &Formula) -> Result<Subset> {
    use Formula as F;
    let hm = model.through(moment);
    let rec = |g: &Formula| extension_at(model, moment, g);
    let cells = |agent: &AgentId, s: Subset| -> Result<Subset> {
        let a = model.agent_index(agent)?;
        Ok(model.choice[a][moment]
            .iter()
            .filter(|c| c.is_subset(s))
            .fold(Subset::EMPTY, |acc, c| acc.union(*c))
            .intersection(hm))
    };
    Ok(match f {
        F::Atom(p) => model
            .valuation
            .get(p)
            .map(|v| v[moment])
            .unwrap_or(Subset::EMPTY)
            .intersection(hm),
        F::Not(a) => hm.difference(rec(a)?),
        F::Or(a, b) => rec(a)?.union(rec(b)?),
        F::And(a, b) => rec(a)?.intersection(rec(b)?),
        F::Implies(a, b) => hm.difference(rec(a)?).union(rec(b)?),
        F::Iff(a, b) => {
            let (x, y) = (rec(a)?, rec(b)?);
            hm.difference(Subset(x.0 ^ y.0))
        }
        F::Necessity(a) => {
            if hm.is_subset(rec(a)?) {
                hm
            } else {
                Subset::EMPTY
            }
        }
        F::Possibility(a) => {
            if rec(a)?.is_empty() {
                Subset::EMPTY
            } else {
                hm
            }
        }
        F::Stit(i, a) => cells(i, rec(a)?)?,
        F::StitDual(i, a) => hm.difference(cells(i, hm.difference(rec(a)?))?),
        F::Ability(..) | F::AbilityDual(..) | F::ForallCore(..) | F::ForallCoreDual(..) => {
            return Err(Error::UnsupportedOperator(
                "strategic operators cannot be evaluated at a moment/history index".into(),
            ))
        }
    })
}

/// Truth of a classical formula at index `m/h`.
pub fn eval_cstit(model: &BtacModel, idx: Index, f: &Formula) -> Result<bool> {
    if idx.moment >= model.frame.len()
        || idx.history >= model.histories.len()
        || !model.histories[idx.history].passes(idx.moment)
    {
        return Err(Error::Precondition("invalid moment/history index".into()));
    }
    Ok(extension_at(model, idx.moment, f)?.contains(idx.history))
}

/// Tree conditions, choice partitions of `H_m`, and pairwise independence of agents.
pub fn validate_btac(model: &BtacModel) -> CheckReport {
    let frame_report = model.frame.check();
    if !frame_report.holds {
        return CheckReport::all("bt+ac", [frame_report]);
    }
    let hist_names = |s: Subset| s.iter().map(|h| model.history_id(h)).collect::<Vec<_>>();
    let moment = |m: usize| model.frame.moments[m].clone();
    let partition = || {
        for (a, per_moment) in model.choice.iter().enumerate() {
            for (m, cells) in per_moment.iter().enumerate() {
                let hm = model.through(m);
                let fail = |detail: &str, sets: Vec<Subset>| {
                    CheckReport::fail(
                        "partition",
                        Witness {
                            states: vec![moment(m)],
                            agents: vec![model.agents[a].clone()],
                            sets: sets.into_iter().map(hist_names).collect(),
                            detail: detail.into(),
                        },
                    )
                };
                if let Some(c) = cells.iter().find(|c| c.is_empty()) {
                    return fail("empty choice cell", vec![*c]);
                }
                if let Some(c) = cells.iter().find(|c| !c.is_subset(hm)) {
                    return fail("cell contains histories not passing through the moment", vec![*c]);
                }
                for (k, x) in cells.iter().enumerate() {
                    if let Some(y) = cells[k + 1..].iter().find(|y| x.intersects(**y)) {
                        return fail("overlapping cells", vec![*x, *y]);
                    }
                }
                let covered = cells.iter().fold(Subset::EMPTY, |acc, c| acc.union(*c));
                if covered != hm {
                    return fail("cells do not cover the histories through the moment", vec![hm.difference(covered)]);
                }
            }
        }
        CheckReport::pass("partition")
    };
    let independence = || {
        let n = model.agents.len();
        for m in 0..model.frame.len() {
            for a in 0..n {
                for b in 0..n {
                    if a == b {
                        continue;
                    }
                    for x in &model.choice[a][m] {
                        if let Some(y) = model.choice[b][m].iter().find(|y| !x.intersects(**y)) {
                            return CheckReport::fail(
                                "independence",
                                Witness {
                                    states: vec![moment(m)],
                                    agents: vec![model.agents[a].clone(), model.agents[b].clone()],
                                    sets: vec![hist_names(*x), hist_names(*y)],
                                    detail: "disjoint choices of distinct agents".into(),
                                },
                            );
                        }
                    }
                }
            }
        }
        CheckReport::pass("independence")
    };
    CheckReport::all("bt+ac", [frame_report, partition(), independence()])
}

/// BT+AC file format. Histories are referred to as `h_<last moment>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BtacFile {
    pub moments: Vec<String>,
    #[serde(default)]
    pub order: Vec<(String, String)>,
    pub agents: Vec<String>,
    /// Moments missing for an agent get the vacuous choice `{H_m}`.
    #[serde(default)]
    pub choice: BTreeMap<String, BTreeMap<String, Vec<Vec<String>>>>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<(String, String)>>,
}

impl BtacFile {
    pub fn into_model(self) -> Result<BtacModel> {
        let frame = BtFrame::new(self.moments, &self.order)?;
        let histories = frame.histories()?;
        let hist = |id: &str| {
            histories
                .iter()
                .position(|h| frame.history_id(h) == id)
                .ok_or_else(|| Error::UnknownHistory(id.to_string()))
        };
        let agents = self
            .agents
            .into_iter()
            .map(AgentId::new)
            .collect::<Result<Vec<_>>>()?;
        if let Some(extra) = self.choice.keys().find(|k| !agents.iter().any(|a| a.as_str() == k.as_str())) {
            return Err(Error::UnknownAgent(extra.clone()));
        }
        let through = |m: usize| {
            Subset::from_indices((0..histories.len()).filter(|&h| histories[h].passes(m)))
        };
        let mut choice = Vec::with_capacity(agents.len());
        for a in &agents {
            let given = self.choice.get(a.as_str());
            if let Some(map) = given {
                for m in map.keys() {
                    frame.moment_index(m)?;
                }
            }
            let mut per_moment = Vec::with_capacity(frame.len());
            for (m, name) in frame.moments().iter().enumerate() {
                let cells = match given.and_then(|map| map.get(name)) {
                    Some(cells) => cells
                        .iter()
                        .map(|c| c.iter().map(|id| hist(id)).collect::<Result<Vec<_>>>().map(Subset::from_indices))
                        .collect::<Result<Vec<_>>>()?,
                    None => vec![through(m)],
                };
                per_moment.push(cells);
            }
            choice.push(per_moment);
        }
        let mut valuation = BTreeMap::new();
        for (p, pairs) in self.valuation {
            let mut per_moment = vec![Subset::EMPTY; frame.len()];
            for (m, h) in pairs {
                let (m, h) = (frame.moment_index(&m)?, hist(&h)?);
                per_moment[m] = per_moment[m].union(Subset::singleton(h));
            }
            valuation.insert(p, per_moment);
        }
        BtacModel::new(frame, agents, choice, valuation)
    }

    pub fn from_model(model: &BtacModel) -> Self {
        let frame = &model.frame;
        let ids = |s: Subset| s.iter().map(|h| model.history_id(h)).collect::<Vec<_>>();
        BtacFile {
            moments: frame.moments.clone(),
            order: frame.order_pairs(),
            agents: model.agents.iter().map(|a| a.to_string()).collect(),
            choice: model
                .agents
                .iter()
                .enumerate()
                .map(|(a, agent)| {
                    let per_moment = frame
                        .moments
                        .iter()
                        .enumerate()
                        .map(|(m, name)| (name.clone(), model.choice[a][m].iter().map(|c| ids(*c)).collect()))
                        .collect();
                    (agent.to_string(), per_moment)
                })
                .collect(),
            valuation: model
                .valuation
                .iter()
                .map(|(p, per_moment)| {
                    let pairs = per_moment
                        .iter()
                        .enumerate()
                        .flat_map(|(m, hs)| hs.iter().map(move |h| (m, h)))
                        .map(|(m, h)| (frame.moments[m].clone(), model.history_id(h)))
                        .collect();
                    (p.clone(), pairs)
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;
    use serde_json::json;

    fn frame(moments: &[&str], order: &[(&str, &str)]) -> BtFrame {
        BtFrame::new(
            moments.iter().map(|s| s.to_string()).collect(),
            &order.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn ids(frame: &BtFrame, hs: &[History]) -> Vec<String> {
        hs.iter().map(|h| frame.history_id(h)).collect()
    }

    fn fork_model() -> BtacModel {
        BtacModel::from_json_str(
            &json!({
                "moments": ["m1", "m2", "m3"],
                "order": [["m1", "m2"], ["m1", "m3"]],
                "agents": ["a"],
                "choice": { "a": { "m1": [["h_m2"], ["h_m3"]] } },
                "valuation": { "p": [["m1", "h_m2"]] }
            })
            .to_string(),
        )
        .unwrap()
    }

    #[test]
    fn histories_examples() {
        let single = frame(&["m1"], &[]);
        assert_eq!(ids(&single, &single.histories().unwrap()), vec!["h_m1"]);

        let fork = frame(&["m1", "m2", "m3"], &[("m1", "m2"), ("m1", "m3")]);
        let hs = fork.histories().unwrap();
        assert_eq!(ids(&fork, &hs), vec!["h_m2", "h_m3"]);
        assert_eq!(hs[0].moments, Subset::from_indices([0, 1]));
        assert_eq!(hs[1].moments, Subset::from_indices([0, 2]));

        let chain = frame(&["m1", "m2", "m3"], &[("m1", "m2"), ("m2", "m3"), ("m1", "m3")]);
        let hs = chain.histories().unwrap();
        assert_eq!(hs.len(), 1);
        assert_eq!(hs[0].moments, Subset::full(3));
    }

    #[test]
    fn histories_through_examples() {
        let fork = frame(&["m1", "m2", "m3"], &[("m1", "m2"), ("m1", "m3")]);
        assert_eq!(histories_through(&fork, "m1").unwrap().len(), 2);
        assert_eq!(ids(&fork, &histories_through(&fork, "m2").unwrap()), vec!["h_m2"]);
        let single = frame(&["m1"], &[]);
        assert_eq!(histories_through(&single, "m1").unwrap().len(), 1);
        assert!(matches!(histories_through(&fork, "m9"), Err(Error::UnknownMoment(_))));
    }

    #[test]
    fn eval_cstit_examples() {
        let m = fork_model();
        let i = m.parse_index("m1/h_m2").unwrap();
        assert!(eval_cstit(&m, i, &parse("box true").unwrap()).unwrap());
        assert!(eval_cstit(&m, i, &parse("[stit:a] p").unwrap()).unwrap());
        assert!(!eval_cstit(&m, i, &parse("box p").unwrap()).unwrap());
        assert!(matches!(
            eval_cstit(&m, i, &parse("[a] p").unwrap()),
            Err(Error::UnsupportedOperator(_))
        ));
        assert!(m.parse_index("m2/h_m3").is_err());
    }

    #[test]
    fn vacuous_choice_makes_stit_historical_necessity() {
        let m = BtacModel::from_json_str(
            &json!({
                "moments": ["m1", "m2", "m3"],
                "order": [["m1", "m2"], ["m1", "m3"]],
                "agents": ["a"],
                "valuation": { "p": [["m1", "h_m2"]], "q": [["m1", "h_m2"], ["m1", "h_m3"]] }
            })
            .to_string(),
        )
        .unwrap();
        for idx in m.indices() {
            for s in ["p", "q", "~p"] {
                let stit = eval_cstit(&m, idx, &parse(&format!("[stit:a] {s}")).unwrap()).unwrap();
                let nec = eval_cstit(&m, idx, &parse(&format!("box {s}")).unwrap()).unwrap();
                assert_eq!(stit, nec);
            }
        }
    }

    #[test]
    fn validate_examples() {
        assert!(validate_btac(&fork_model()).holds);

        let clash = BtacModel::from_json_str(
            &json!({
                "moments": ["m1", "m2", "m3"],
                "order": [["m1", "m2"], ["m1", "m3"]],
                "agents": ["a", "b"],
                "choice": {
                    "a": { "m1": [["h_m2"], ["h_m3"]] },
                    "b": { "m1": [["h_m2"], ["h_m3"]] }
                }
            })
            .to_string(),
        )
        .unwrap();
        let r = validate_btac(&clash);
        assert!(!r.holds);
        assert!(r.notes.iter().any(|n| n.contains("independence")));

        let bad = frame(&["m1", "m2", "m3"], &[("m2", "m1"), ("m3", "m1")]);
        let r = bad.check();
        assert!(!r.holds);
        assert_eq!(r.label, "backward linearity");
        assert!(bad.histories().is_err());
    }

    #[test]
    fn partition_violations_are_reported() {
        let overlap = BtacModel::from_json_str(
            &json!({
                "moments": ["m1", "m2", "m3"],
                "order": [["m1", "m2"], ["m1", "m3"]],
                "agents": ["a"],
                "choice": { "a": { "m1": [["h_m2", "h_m3"], ["h_m3"]] } }
            })
            .to_string(),
        )
        .unwrap();
        assert!(!validate_btac(&overlap).holds);
        let gap = BtacModel::from_json_str(
            &json!({
                "moments": ["m1", "m2", "m3"],
                "order": [["m1", "m2"], ["m1", "m3"]],
                "agents": ["a"],
                "choice": { "a": { "m1": [["h_m2"]] } }
            })
            .to_string(),
        )
        .unwrap();
        let r = validate_btac(&gap);
        assert!(!r.holds);
        assert_eq!(r.witness.unwrap().sets, vec![vec!["h_m3".to_string()]]);
    }

    #[test]
    fn irreflexivity_and_transitivity_failures() {
        assert_eq!(frame(&["m1"], &[("m1", "m1")]).check().label, "irreflexive");
        let r = frame(&["m1", "m2", "m3"], &[("m1", "m2"), ("m2", "m3")]).check();
        assert_eq!(r.label, "transitive");
    }

    #[test]
    fn file_round_trip() {
        let m = fork_model();
        let text = serde_json::to_string(&m.to_file()).unwrap();
        assert_eq!(BtacModel::from_json_str(&text).unwrap(), m);
    }
}
