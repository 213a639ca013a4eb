//! Correspondence between BT+AC models and one-shot neighbourhood models.
//!
//! Each moment `m` yields a neighbourhood model whose states are the
//! indices `m/h`; the disjoint union of these per-moment models evaluates
//! the strategic language the same way the BT+AC model evaluates its
//! translation, provided `box` ranges over the component of the current
//! state.

use std::collections::BTreeMap;

use crate::btac::{extension_at, BtacModel};
use crate::error::{Error, Result};
use crate::mc::Program;
use crate::nbhd::{NbhdFrame, NbhdModel, StateSet, Subset};
use crate::report::{CheckReport, Witness};
use crate::syntax::{translate_tr, Formula};

/// The one-shot model at moment `m`: states are indices `m/h`, each agent's
/// generators are its choice cells at `m`, and the valuation is restricted.
pub fn bt_to_osstit(model: &BtacModel, moment: &str) -> Result<NbhdModel> {
    let m = model.frame().moment_index(moment)?;
    moment_model(model, m)
}

fn moment_model(model: &BtacModel, m: usize) -> Result<NbhdModel> {
    let hm: Vec<usize> = model.through(m).iter().collect();
    let local = |hs: Subset| Subset::from_indices(hm.iter().enumerate().filter(|(_, h)| hs.contains(**h)).map(|(k, _)| k));
    let names = hm
        .iter()
        .map(|&h| format!("{}/{}", model.frame().moments()[m], model.history_id(h)))
        .collect();
    let states = StateSet::new(names)?;
    let per_agent = (0..model.agents().len())
        .map(|a| model.choice_at(a, m).iter().map(|c| local(*c)).collect())
        .collect();
    let frame = NbhdFrame::uniform(states, model.agents().to_vec(), per_agent)
        .map_err(|e| Error::InvalidModel(format!("choice at moment `{}`: {e}", model.frame().moments()[m])))?;
    let valuation = model
        .valuation()
        .iter()
        .map(|(p, per_moment)| (p.clone(), local(per_moment[m])))
        .collect();
    NbhdModel::new(frame, valuation)
}

/// A disjoint union together with the state set of each component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointUnion {
    pub model: NbhdModel,
    pub components: Vec<Subset>,
}

/// Disjoint union of neighbourhood models over a shared agent set.
///
/// State names are kept when they are already pairwise distinct and
/// renamed `c{n}:{state}` otherwise. Generators of component `n` are kept
/// as they are: their up-closure in the union contains `X` exactly when it
/// contains `X ∩ W_n`.
pub fn disjoint_union(models: &[NbhdModel]) -> Result<DisjointUnion> {
    let first = models
        .first()
        .ok_or_else(|| Error::Precondition("disjoint union of no models".into()))?;
    let agents = first.frame.agents().to_vec();
    for m in models {
        let mut mine = m.frame.agents().to_vec();
        let mut theirs = agents.clone();
        mine.sort();
        theirs.sort();
        if mine != theirs {
            return Err(Error::Precondition("components must share the agent set".into()));
        }
    }
    let raw: Vec<&String> = models.iter().flat_map(|m| m.frame.states().names()).collect();
    let distinct = raw.iter().collect::<std::collections::BTreeSet<_>>().len() == raw.len();
    let mut names = Vec::with_capacity(raw.len());
    let mut offsets = Vec::with_capacity(models.len());
    let mut components = Vec::with_capacity(models.len());
    for (n, m) in models.iter().enumerate() {
        let offset = names.len();
        offsets.push(offset);
        components.push(Subset(Subset::full(m.frame.len()).0 << offset));
        for s in m.frame.states().names() {
            names.push(if distinct { s.clone() } else { format!("c{n}:{s}") });
        }
    }
    let states = StateSet::new(names)?;
    let shift = |s: Subset, offset: usize| Subset(s.0 << offset);
    let mut gens = vec![Vec::with_capacity(states.len()); agents.len()];
    for (m, &offset) in models.iter().zip(&offsets) {
        for (a, agent) in agents.iter().enumerate() {
            let local = m.frame.agent_index(agent)?;
            for w in 0..m.frame.len() {
                gens[a].push(m.frame.gens_at(local, w).iter().map(|g| shift(*g, offset)).collect());
            }
        }
    }
    let mut valuation: BTreeMap<String, Subset> = BTreeMap::new();
    for (m, &offset) in models.iter().zip(&offsets) {
        for (p, s) in &m.valuation {
            let e = valuation.entry(p.clone()).or_default();
            *e = e.union(shift(*s, offset));
        }
    }
    let frame = NbhdFrame::new(states, agents, gens)?;
    Ok(DisjointUnion {
        model: NbhdModel::new(frame, valuation)?,
        components,
    })
}

/// The per-moment family of a BT+AC model and its disjoint union. Union
/// states are named `m/h`, which are distinct across moments.
pub fn moment_union(model: &BtacModel) -> Result<DisjointUnion> {
    let family = (0..model.frame().len())
        .map(|m| moment_model(model, m))
        .collect::<Result<Vec<_>>>()?;
    disjoint_union(&family)
}

/// Checks that the union of the per-moment models satisfies `f` at `m/h`
/// exactly when the BT+AC model satisfies `tr(f)` there, for every index.
///
/// `box` is evaluated per component. Indices where the global reading of
/// `box` (over the whole union) would disagree are listed as notes.
pub fn check_translation_equiv(model: &BtacModel, f: &Formula) -> Result<CheckReport> {
    if !f.is_osstit_pure() {
        return Err(Error::Precondition("formula must not contain [stit:i]".into()));
    }
    let translated = translate_tr(f)?;
    let union = moment_union(model)?;
    let program = Program::compile(f)?;
    let scoped = program.extension_scoped(&union.model, &union.components)?;
    let global = program.extension(&union.model)?;
    let label = format!("translation equivalence for {f}");
    let mut report = CheckReport::pass(label.clone());
    let mut state = 0;
    for m in 0..model.frame().len() {
        let classical = extension_at(model, m, &translated)?;
        for h in model.through(m).iter() {
            let name = model.index_name(crate::btac::Index { moment: m, history: h });
            debug_assert_eq!(union.model.frame.states().name(state), name);
            let lhs = scoped.contains(state);
            let rhs = classical.contains(h);
            if lhs != rhs {
                return Ok(CheckReport::fail(
                    label,
                    Witness {
                        states: vec![name],
                        detail: format!(
                            "union gives {lhs} for `{f}`, BT+AC model gives {rhs} for `{translated}`"
                        ),
                        ..Witness::default()
                    },
                ));
            }
            if global.contains(state) != lhs {
                report = report.with_note(format!("global box reading differs at {name}"));
            }
            state += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mc::eval;
    use crate::syntax::parse;
    use serde_json::json;

    fn fork_model() -> BtacModel {
        BtacModel::from_json_str(
            &json!({
                "moments": ["m1", "m2", "m3"],
                "order": [["m1", "m2"], ["m1", "m3"]],
                "agents": ["a"],
                "choice": { "a": { "m1": [["h_m2"], ["h_m3"]] } },
                "valuation": { "p": [["m1", "h_m2"], ["m2", "h_m2"]] }
            })
            .to_string(),
        )
        .unwrap()
    }

    #[test]
    fn extraction_of_fork_moment() {
        let m = bt_to_osstit(&fork_model(), "m1").unwrap();
        assert_eq!(m.frame.states().names(), &["m1/h_m2".to_string(), "m1/h_m3".to_string()]);
        assert_eq!(m.frame.gens_at(0, 0), &[Subset(0b01), Subset(0b10)]);
        assert_eq!(m.value("p"), Subset(0b01));
        assert!(m.frame.is_class_p().holds);
    }

    #[test]
    fn vacuous_choice_gives_single_generator() {
        let m = bt_to_osstit(&fork_model(), "m2").unwrap();
        assert_eq!(m.frame.len(), 1);
        assert_eq!(m.frame.gens_at(0, 0), &[m.frame.full()]);
        assert!(bt_to_osstit(&fork_model(), "nowhere").is_err());
    }

    #[test]
    fn grid_moment_is_class_c() {
        let model = BtacModel::from_json_str(
            &json!({
                "moments": ["m", "x1", "x2", "x3", "x4"],
                "order": [["m", "x1"], ["m", "x2"], ["m", "x3"], ["m", "x4"]],
                "agents": ["a", "b"],
                "choice": {
                    "a": { "m": [["h_x1", "h_x2"], ["h_x3", "h_x4"]] },
                    "b": { "m": [["h_x1", "h_x3"], ["h_x2", "h_x4"]] }
                }
            })
            .to_string(),
        )
        .unwrap();
        let m = bt_to_osstit(&model, "m").unwrap();
        assert!(m.frame.is_class_c().holds);
        assert!(m.frame.is_class_p().holds);
    }

    #[test]
    fn union_of_one_model_is_identity() {
        let m = bt_to_osstit(&fork_model(), "m1").unwrap();
        let u = disjoint_union(std::slice::from_ref(&m)).unwrap();
        assert_eq!(u.model, m);
        assert_eq!(u.components, vec![m.frame.full()]);
    }

    #[test]
    fn union_of_single_state_models() {
        let single = |v: &[&str]| {
            NbhdModel::from_json_str(
                &json!({ "states": ["w"], "agents": ["a"], "choice": { "a": { "uniform": [["w"]] } }, "valuation": { "p": v } })
                    .to_string(),
            )
            .unwrap()
        };
        let u = disjoint_union(&[single(&["w"]), single(&[])]).unwrap();
        let st = u.model.frame.states();
        assert_eq!(st.names(), &["c0:w".to_string(), "c1:w".to_string()]);
        assert_eq!(u.model.frame.gens_at(0, 0), &[Subset(0b01)]);
        assert_eq!(u.model.frame.gens_at(0, 1), &[Subset(0b10)]);
        assert_eq!(u.model.value("p"), Subset(0b01));
        assert!(!u.model.frame.check_nec().holds);
    }

    #[test]
    fn union_rejects_mismatched_agents() {
        let one = |agent: &str| {
            NbhdModel::from_json_str(
                &json!({ "states": ["w"], "agents": [agent], "choice": { agent: { "uniform": [["w"]] } } }).to_string(),
            )
            .unwrap()
        };
        assert!(disjoint_union(&[one("a"), one("b")]).is_err());
    }

    #[test]
    fn translation_holds_on_fork() {
        for s in ["p", "[a] p", "box p", "[a] p -> box p", "~[a] ~p", "box [a] (p | q)"] {
            let r = check_translation_equiv(&fork_model(), &parse(s).unwrap()).unwrap();
            assert!(r.holds, "{s}: {r:?}");
        }
    }

    #[test]
    fn box_in_union_is_scoped_to_the_moment() {
        let model = fork_model();
        let union = moment_union(&model).unwrap();
        let f = parse("box p").unwrap();
        let prog = Program::compile(&f).unwrap();
        let scoped = prog.extension_scoped(&union.model, &union.components).unwrap();
        // m2 has a single history and p holds there; m1 has h_m3 where p fails.
        let names: Vec<String> = union.model.frame.states().names_of(scoped);
        assert_eq!(names, vec!["m2/h_m2".to_string()]);
        let global = eval(&union.model, "m2/h_m2", &f).unwrap();
        assert!(!global);
        let r = check_translation_equiv(&model, &f).unwrap();
        assert!(r.holds);
        assert!(r.notes.iter().any(|n| n.contains("m2/h_m2")));
    }

    #[test]
    fn translation_rejects_forall_core() {
        assert!(check_translation_equiv(&fork_model(), &parse("[E:a] p").unwrap()).is_err());
    }
}
