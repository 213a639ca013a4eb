//! Bounded core morphisms between neighbourhood frames.
//!
//! Also hosts the two-frame fixture showing that partition cores are not
//! preserved under bounded morphic images: `F1` has partition cores, `F2`
//! does not, and `F2` is a surjective bounded core image of `F1`.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::nbhd::{NbhdFrame, NbhdModel, StateSet, Subset};
use crate::report::{CheckReport, Witness};
use crate::syntax::{AgentId, Formula};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreMorphism {
    pub source: NbhdFrame,
    pub target: NbhdFrame,
    map: Vec<usize>,
}

impl CoreMorphism {
    /// `map[w]` is the target index of source state `w`. Both frames must
    /// share the agent set.
    pub fn new(source: NbhdFrame, target: NbhdFrame, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() {
            return Err(Error::Precondition("map must be total on the source states".into()));
        }
        if map.iter().any(|&v| v >= target.len()) {
            return Err(Error::Precondition("map points outside the target states".into()));
        }
        for a in source.agents() {
            target.agent_index(a)?;
        }
        if source.agents().len() != target.agents().len() {
            return Err(Error::Precondition("frames must share the agent set".into()));
        }
        Ok(CoreMorphism { source, target, map })
    }

    pub fn from_names(source: NbhdFrame, target: NbhdFrame, map: &BTreeMap<String, String>) -> Result<Self> {
        let mut indices = vec![usize::MAX; source.len()];
        for (s, t) in map {
            indices[source.states().index_of(s)?] = target.states().index_of(t)?;
        }
        if let Some(w) = indices.iter().position(|&v| v == usize::MAX) {
            return Err(Error::Precondition(format!(
                "map is undefined on `{}`",
                source.states().name(w)
            )));
        }
        CoreMorphism::new(source, target, indices)
    }

    pub fn apply(&self, w: usize) -> usize {
        self.map[w]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn image(&self, x: Subset) -> Subset {
        Subset::from_indices(x.iter().map(|w| self.map[w]))
    }

    pub fn preimage(&self, y: Subset) -> Subset {
        Subset::from_indices((0..self.map.len()).filter(|&w| y.contains(self.map[w])))
    }

    /// `self` followed by `next`.
    pub fn compose(&self, next: &CoreMorphism) -> Result<CoreMorphism> {
        if self.target != next.source {
            return Err(Error::Precondition("morphisms do not compose".into()));
        }
        let map = self.map.iter().map(|&v| next.map[v]).collect();
        CoreMorphism::new(self.source.clone(), next.target.clone(), map)
    }
}

/// Forth: every source core cell at `w` maps onto a target core cell at
/// `f(w)`. Back: every target core cell at `f(w)` is the image of a source
/// core cell at `w`.
pub fn is_bounded_core_morphism(m: &CoreMorphism) -> CheckReport {
    let src = &m.source;
    let tgt = &m.target;
    for (a, agent) in src.agents().iter().enumerate() {
        let ta = tgt.agent_index(agent).expect("checked at construction");
        for w in 0..src.len() {
            let fw = m.apply(w);
            let source_core = src.gens_at(a, w);
            let target_core = tgt.gens_at(ta, fw);
            let witness = |set: Subset, names: &StateSet, detail: &str| Witness {
                states: vec![src.states().name(w).to_string(), tgt.states().name(fw).to_string()],
                agents: vec![agent.clone()],
                sets: vec![names.names_of(set)],
                detail: detail.into(),
            };
            if let Some(&x) = source_core.iter().find(|x| !target_core.contains(&m.image(**x))) {
                return CheckReport::fail(
                    "forth",
                    witness(x, src.states(), "image of this source core cell is not a target core cell"),
                );
            }
            if let Some(&y) = target_core
                .iter()
                .find(|y| !source_core.iter().any(|x| m.image(*x) == **y))
            {
                return CheckReport::fail(
                    "back",
                    witness(y, tgt.states(), "target core cell is not the image of a source core cell"),
                );
            }
        }
    }
    CheckReport::pass("bounded core morphism")
}

pub fn is_surjective(m: &CoreMorphism) -> bool {
    m.image(m.source.full()) == m.target.full()
}

/// Target model whose valuation pulls back to the source valuation:
/// `V₂(p) = f[V₁(p)]`, requiring each `V₁(p)` to be a union of fibres.
pub fn image_model(m: &CoreMorphism, src: &NbhdModel) -> Result<NbhdModel> {
    if src.frame != m.source {
        return Err(Error::Precondition("model is not over the morphism's source frame".into()));
    }
    let mut valuation = BTreeMap::new();
    for (p, &s) in &src.valuation {
        let image = m.image(s);
        if m.preimage(image) != s {
            let stray = m.preimage(image).difference(s);
            return Err(Error::Precondition(format!(
                "valuation of `{p}` is not a union of fibres (e.g. {:?} shares an image with it)",
                src.frame.states().names_of(stray)
            )));
        }
        valuation.insert(p.clone(), image);
    }
    NbhdModel::new(m.target.clone(), valuation)
}

/// Checks that every formula over atoms, `~`, `|`, `box` and `[i]` up to
/// the given modal depth has the same truth value at `w` in the source
/// model as at `f(w)` in the image model.
///
/// Formulas are enumerated up to joint semantic value: each formula is
/// represented by its pair of extensions, so only one representative per
/// pair is kept. The closure is finite and exact.
pub fn check_modal_equivalence(m: &CoreMorphism, src: &NbhdModel, depth: usize) -> Result<CheckReport> {
    if !is_bounded_core_morphism(m).holds {
        return Err(Error::Precondition("map is not a bounded core morphism".into()));
    }
    if !is_surjective(m) {
        return Err(Error::Precondition("map is not surjective".into()));
    }
    let tgt = image_model(m, src)?;
    let mut closure = PairClosure::new(m, src, &tgt);
    for (p, &s) in &src.valuation {
        closure.add(s, tgt.value(p), Formula::atom(p.clone()));
    }
    closure.add(src.frame.full(), tgt.frame.full(), Formula::top());
    closure.close_boolean();
    for _ in 0..depth {
        let snapshot: Vec<(Subset, Subset, Formula)> = closure.pairs.clone();
        for (s1, s2, f) in snapshot {
            closure.add(
                nec(src.frame.full(), s1),
                nec(tgt.frame.full(), s2),
                Formula::nec(f.clone()),
            );
            for agent in src.frame.agents() {
                let (a1, a2) = (src.frame.agent_index(agent)?, tgt.frame.agent_index(agent)?);
                closure.add(
                    ability(&src.frame, a1, s1),
                    ability(&tgt.frame, a2, s2),
                    Formula::ability(agent, f.clone()),
                );
            }
        }
        closure.close_boolean();
    }
    let label = format!("modal equivalence up to depth {depth}");
    Ok(match closure.failure {
        Some((f, w)) => CheckReport::fail(
            label,
            Witness {
                states: vec![
                    src.frame.states().name(w).to_string(),
                    tgt.frame.states().name(m.apply(w)).to_string(),
                ],
                detail: format!("`{f}` differs between the source state and its image"),
                ..Witness::default()
            },
        ),
        None => CheckReport::pass(label).with_note(format!(
            "{} semantically distinct formulas checked",
            closure.pairs.len()
        )),
    })
}

fn nec(full: Subset, s: Subset) -> Subset {
    if s == full {
        full
    } else {
        Subset::EMPTY
    }
}

fn ability(frame: &NbhdFrame, agent: usize, s: Subset) -> Subset {
    Subset::from_indices((0..frame.len()).filter(|&w| frame.member_at(agent, w, s)))
}

struct PairClosure<'a> {
    morphism: &'a CoreMorphism,
    full: (Subset, Subset),
    pairs: Vec<(Subset, Subset, Formula)>,
    seen: HashMap<(Subset, Subset), usize>,
    failure: Option<(Formula, usize)>,
}

impl<'a> PairClosure<'a> {
    fn new(morphism: &'a CoreMorphism, src: &NbhdModel, tgt: &NbhdModel) -> Self {
        PairClosure {
            morphism,
            full: (src.frame.full(), tgt.frame.full()),
            pairs: Vec::new(),
            seen: HashMap::new(),
            failure: None,
        }
    }

    fn add(&mut self, s1: Subset, s2: Subset, f: Formula) -> bool {
        if self.seen.contains_key(&(s1, s2)) {
            return false;
        }
        let pulled = self.morphism.preimage(s2);
        if pulled != s1 && self.failure.is_none() {
            let w = Subset(pulled.0 ^ s1.0).iter().next().expect("nonempty difference");
            self.failure = Some((f.clone(), w));
        }
        self.seen.insert((s1, s2), self.pairs.len());
        self.pairs.push((s1, s2, f));
        true
    }

    fn close_boolean(&mut self) {
        let mut next = 0;
        while next < self.pairs.len() && self.failure.is_none() {
            let (s1, s2, f) = self.pairs[next].clone();
            self.add(
                self.full.0.difference(s1),
                self.full.1.difference(s2),
                Formula::not(f.clone()),
            );
            for k in 0..=next {
                let (t1, t2, g) = self.pairs[k].clone();
                self.add(s1.union(t1), s2.union(t2), Formula::or(g, f.clone()));
            }
            next += 1;
        }
    }
}

/// The frames `F1`, `F2` and the map `f` (`w4 ↦ w2`, identity elsewhere).
///
/// `F1`: core `{{w1,w2},{w3,w4}}` at `w1` and `{W1}` elsewhere.
/// `F2`: core `{{w1,w2},{w2,w3}}` at `w1` and `{W2}` elsewhere.
pub fn fixture_theorem3() -> (NbhdFrame, NbhdFrame, CoreMorphism) {
    let agent = AgentId::new("a").expect("valid agent");
    let w1 = StateSet::numbered(4).expect("four states");
    let w2 = StateSet::numbered(3).expect("three states");
    let f1_w1 = vec![Subset::from_indices([0, 1]), Subset::from_indices([2, 3])];
    let mut f1 = vec![vec![w1.full()]; 4];
    f1[0] = f1_w1;
    let f2_w1 = vec![Subset::from_indices([0, 1]), Subset::from_indices([1, 2])];
    let mut f2 = vec![vec![w2.full()]; 3];
    f2[0] = f2_w1;
    let frame1 = NbhdFrame::new(w1, vec![agent.clone()], vec![f1]).expect("fixture F1 is well-formed");
    let frame2 = NbhdFrame::new(w2, vec![agent], vec![f2]).expect("fixture F2 is well-formed");
    let f = CoreMorphism::new(frame1.clone(), frame2.clone(), vec![0, 1, 2, 1]).expect("fixture map is total");
    (frame1, frame2, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with_valuation(frame: &NbhdFrame, p: &[&str]) -> NbhdModel {
        let mut v = BTreeMap::new();
        v.insert("p".to_string(), frame.states().subset(p).unwrap());
        NbhdModel::new(frame.clone(), v).unwrap()
    }

    #[test]
    fn fixture_facts() {
        let (f1, f2, f) = fixture_theorem3();
        assert!(f1.check_partition_cores().holds);
        let r = f2.check_partition_cores();
        assert!(!r.holds);
        assert_eq!(r.witness.unwrap().sets[2], vec!["w2".to_string()]);
        assert!(is_surjective(&f));
        assert!(is_bounded_core_morphism(&f).holds);
    }

    #[test]
    fn identity_is_bounded_and_surjective() {
        let (f1, _, _) = fixture_theorem3();
        let id = CoreMorphism::new(f1.clone(), f1.clone(), (0..4).collect()).unwrap();
        assert!(is_bounded_core_morphism(&id).holds);
        assert!(is_surjective(&id));
        let m = with_valuation(&f1, &["w1", "w3"]);
        assert!(check_modal_equivalence(&id, &m, 2).unwrap().holds);
    }

    #[test]
    fn reversed_map_fails_back_condition() {
        let (f1, f2, _) = fixture_theorem3();
        // w1↦w1, w2↦w2, w3↦w3 from F2 back into F1.
        let rev = CoreMorphism::new(f2, f1, vec![0, 1, 2]).unwrap();
        let r = is_bounded_core_morphism(&rev);
        assert!(!r.holds);
        assert!(!is_surjective(&rev));
    }

    #[test]
    fn non_surjective_map() {
        let (_, f2, _) = fixture_theorem3();
        let two = NbhdFrame::uniform(
            StateSet::numbered(2).unwrap(),
            vec![AgentId::new("a").unwrap()],
            vec![vec![Subset::full(2)]],
        )
        .unwrap();
        let m = CoreMorphism::new(f2, two, vec![0, 0, 0]).unwrap();
        assert!(!is_surjective(&m));
    }

    #[test]
    fn fibre_incompatible_valuation_is_rejected() {
        let (f1, _, f) = fixture_theorem3();
        let m = with_valuation(&f1, &["w1", "w2"]);
        assert!(matches!(check_modal_equivalence(&f, &m, 2), Err(Error::Precondition(_))));
    }

    #[test]
    fn fibre_valuation_is_equivalent_to_depth_two() {
        let (f1, _, f) = fixture_theorem3();
        let m = with_valuation(&f1, &["w2", "w4"]);
        let r = check_modal_equivalence(&f, &m, 2).unwrap();
        assert!(r.holds, "{r:?}");
    }

    #[test]
    fn broken_morphism_is_rejected_before_enumeration() {
        let (f1, f2, _) = fixture_theorem3();
        let bad = CoreMorphism::new(f1.clone(), f2, vec![1, 0, 2, 1]).unwrap();
        assert!(!is_bounded_core_morphism(&bad).holds);
        assert!(check_modal_equivalence(&bad, &with_valuation(&f1, &[]), 1).is_err());
    }

    #[test]
    fn from_names_requires_total_map() {
        let (f1, f2, _) = fixture_theorem3();
        let mut map = BTreeMap::new();
        map.insert("w1".to_string(), "w1".to_string());
        assert!(CoreMorphism::from_names(f1, f2, &map).is_err());
    }
}
