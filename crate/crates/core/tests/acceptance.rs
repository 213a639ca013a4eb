//! Acceptance criteria, one line of output each. Exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::Rng;

use common::{all_antichains, all_forests, brute_force_histories, frame_of, up_closure};
use stitkit::bridge::check_translation_equiv;
use stitkit::logic::{
    self, falsify, fuzz_model, generate_violating_frame, instantiate, random_btac, rng_for, validity_search, AxiomSchema,
    BtacParams, FormulaGen, FrameCondition, FuzzConfig, SearchBounds, SearchOutcome,
};
use stitkit::mc;
use stitkit::morphism::{fixture_theorem3, is_bounded_core_morphism, is_surjective};
use stitkit::nbhd::{NbhdFrame, StateSet, Subset};
use stitkit::syntax::parse;
use stitkit::{AgentId, Formula};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn fixture_suite() -> Outcome {
    let start = Instant::now();
    let (f1, f2, f) = fixture_theorem3();
    let st1 = f1.states();
    for w in st1.names() {
        let core = f1.core(&AgentId::new("a").unwrap(), w).map_err(|e| e.to_string())?;
        ensure(core.iter().fold(Subset::EMPTY, |acc, c| acc.union(*c)) == f1.full(), || format!("F1 core at {w} does not cover W"))?;
        ensure(core.iter().enumerate().all(|(i, x)| core[i + 1..].iter().all(|y| !x.intersects(*y))), || {
            format!("F1 core at {w} overlaps")
        })?;
    }
    ensure(f1.check_partition_cores().holds, || "F1 partition check failed".into())?;
    let core2 = f2.gens_at(0, 0);
    ensure(core2.len() == 2 && core2[0].intersection(core2[1]) == f2.states().subset(&["w2"]).unwrap(), || {
        format!("F2 core at w1 is {core2:?}")
    })?;
    let p = f2.check_partition_cores();
    ensure(!p.holds && p.witness.as_ref().unwrap().sets[2] == vec!["w2".to_string()], || format!("{p:?}"))?;
    ensure(is_surjective(&f), || "f is not surjective".into())?;
    let bounded = is_bounded_core_morphism(&f);
    ensure(bounded.holds, || format!("{bounded:?}"))?;
    ensure(f.map() == [0, 1, 2, 1], || format!("map {:?}", f.map()))?;
    within(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("F1 partition cores, F2 overlap {{w2}}, f surjective bounded ({:.0?})", start.elapsed()))
}

fn soundness() -> Outcome {
    let start = Instant::now();
    let config = FuzzConfig {
        models: 500,
        max_states: 5,
        max_agents: 3,
        max_atoms: 3,
        schemas: AxiomSchema::ALL.to_vec(),
        seed: 2024,
        instances_per_schema: 4,
        formula_depth: 2,
        frame_class: logic::FrameClass::ClassC,
    };
    for i in 0..config.models {
        let (m, gen) = fuzz_model(&config, i).map_err(|e| e.to_string())?;
        ensure(m.frame.is_class_c().holds, || format!("model {i} is not class C"))?;
        ensure(m.frame.len() <= 5 && m.frame.agents().len() <= 3 && gen.atoms.len() <= 3, || format!("model {i} out of bounds"))?;
    }
    let out = logic::soundness_fuzz(&config).map_err(|e| e.to_string())?;
    ensure(out.report.holds, || format!("{:?}", out.report))?;
    ensure(out.stats.models >= 500, || "too few models".into())?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "{} instances of {} schemas on {} class-C models, 0 invalid ({:.1?})",
        out.stats.instances,
        config.schemas.len(),
        out.stats.models,
        start.elapsed()
    ))
}

fn definability_converses() -> Outcome {
    let start = Instant::now();
    let mut rng = rng_for(7, 0);
    let mut total = 0;
    for cond in [FrameCondition::Ind, FrameCondition::Nec, FrameCondition::Un] {
        for _ in 0..40 {
            let frame = generate_violating_frame(&mut rng, cond, 5, 3).map_err(|e| e.to_string())?;
            let all = [FrameCondition::Ind, FrameCondition::Nec, FrameCondition::Un];
            ensure(all.iter().all(|&c| c.check(&frame).holds == (c != cond)), || format!("{cond:?}: not exactly one violation"))?;
            let fx = falsify(&frame, cond).map_err(|e| e.to_string())?;
            let value = mc::eval(&fx.model, &fx.state, &fx.instance).map_err(|e| e.to_string())?;
            ensure(!value, || format!("{cond:?}: `{}` holds at {}", fx.instance, fx.state))?;
            total += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(10))?;
    Ok(format!("{total}/{total} violating frames falsified ({:.0?})", start.elapsed()))
}

fn definitional_equivalence() -> Outcome {
    let config = FuzzConfig {
        seed: 31,
        ..FuzzConfig::default()
    };
    let mut rng = rng_for(31, 1);
    let mut comparisons = 0u64;
    for i in 0..200 {
        let (model, mut gen) = fuzz_model(&config, i).map_err(|e| e.to_string())?;
        gen.depth = 2;
        for _ in 0..50 {
            let f = gen.generate(&mut rng);
            for agent in model.frame.agents() {
                let ability = mc::extension(&model, &Formula::ability(agent, f.clone())).map_err(|e| e.to_string())?;
                let forall = mc::extension(&model, &Formula::forall_core(agent, f.clone())).map_err(|e| e.to_string())?;
                for (w, name) in model.frame.states().names().iter().enumerate() {
                    let core = mc::eval_ability_core(&model, name, agent, &f).map_err(|e| e.to_string())?;
                    let rel = mc::eval_forall_rel(&model, name, agent, &f).map_err(|e| e.to_string())?;
                    ensure(ability.contains(w) == core, || format!("[{agent}] `{f}` at {name} in model {i}"))?;
                    ensure(forall.contains(w) == rel, || format!("[E:{agent}] `{f}` at {name} in model {i}"))?;
                    comparisons += 2;
                }
            }
        }
    }
    Ok(format!("200 models x 50 formulas, {comparisons} comparisons, 0 disagreements"))
}

fn translation_theorem() -> Outcome {
    let start = Instant::now();
    let mut rng = rng_for(99, 0);
    let small = BtacParams {
        max_moments: 4,
        max_children: 4,
        max_depth: 4,
        agents: 2,
        atoms: 3,
    };
    // Beyond the stated bound: trees with up to four levels.
    let deep = BtacParams {
        max_moments: 16,
        ..small
    };
    let mut indices = 0;
    let mut models = 0;
    for (params, count) in [(small, 200), (deep, 50)] {
        for _ in 0..count {
            let agents = rng.gen_range(1..=3);
            let model = random_btac(&mut rng, &BtacParams { agents, ..params }).map_err(|e| e.to_string())?;
            let atoms: Vec<String> = model.valuation().keys().cloned().collect();
            let mut gen = FormulaGen::new(atoms, model.agents().to_vec(), 3);
            gen.forall_core = false;
            gen.size = 8;
            for _ in 0..20 {
                let f = gen.generate(&mut rng);
                let report = check_translation_equiv(&model, &f).map_err(|e| e.to_string())?;
                ensure(report.holds, || format!("{report:?}"))?;
            }
            indices += model.indices().len();
            models += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!(
        "{models} BT+AC models x 20 formulas ({indices} indices), 0 witnesses ({:.1?})",
        start.elapsed()
    ))
}

fn bounded_validity() -> Outcome {
    let start = Instant::now();
    let bounds = SearchBounds {
        max_states: 3,
        agent_count: 2,
        atom_count: 3,
        max_seconds: 120.0,
    };
    let a = AgentId::new("a").unwrap();
    let b = AgentId::new("b").unwrap();
    let p = Formula::atom("p");
    let q = Formula::atom("q");
    let instances = [
        (AxiomSchema::Incl, vec![p.clone()], vec![a.clone()]),
        (AxiomSchema::N, vec![], vec![a.clone()]),
        (AxiomSchema::D, vec![], vec![a.clone()]),
        (AxiomSchema::Pos, vec![p.clone()], vec![a.clone()]),
        (AxiomSchema::NecA, vec![p.clone()], vec![a.clone()]),
        (AxiomSchema::Ind, vec![p.clone(), q.clone()], vec![a.clone(), b.clone()]),
    ];
    let mut explored = 0;
    for (schema, fs, ags) in instances {
        let f = instantiate(schema, &fs, &ags).map_err(|e| e.to_string())?;
        let r = validity_search(&f, &bounds).map_err(|e| e.to_string())?;
        ensure(r.outcome == SearchOutcome::ValidUpToBound, || format!("{schema} `{f}` refuted"))?;
        explored += r.models_explored;
    }
    let refute = |text: &str| -> Result<usize, String> {
        let f = parse(text).unwrap();
        match validity_search(&f, &bounds).map_err(|e| e.to_string())?.outcome {
            SearchOutcome::Countermodel(c) => {
                let value = mc::eval(&c.model, &c.state, &f).map_err(|e| e.to_string())?;
                ensure(!value && c.model.frame.is_class_c().holds, || format!("bad countermodel for `{text}`"))?;
                Ok(c.model.frame.len())
            }
            SearchOutcome::ValidUpToBound => Err(format!("no countermodel for `{text}`")),
        }
    };
    let size = refute("[a]p -> p")?;
    ensure(size == 2, || format!("countermodel for `[a]p -> p` has {size} states"))?;
    refute("[a]p -> [b]p")?;
    within(start.elapsed(), Duration::from_secs(120))?;
    Ok(format!(
        "6 schema instances valid up to |W| = 3 ({explored} models), both countermodels found ({:.1?})",
        start.elapsed()
    ))
}

fn oracle_cross_checks() -> Outcome {
    let mut trees = 0;
    for n in 1..=5 {
        for pairs in all_forests(n) {
            let frame = frame_of(n, &pairs);
            let ours: BTreeSet<u64> = frame.histories().map_err(|e| e.to_string())?.iter().map(|h| h.moments.0).collect();
            ensure(ours == brute_force_histories(n, &pairs), || format!("histories differ on {pairs:?}"))?;
            trees += 1;
        }
    }
    let a = AgentId::new("a").unwrap();
    let mut families = 0;
    for n in 1..=4 {
        for family in all_antichains(n) {
            let up = up_closure(n, &family);
            let frame = NbhdFrame::uniform(StateSet::numbered(n).unwrap(), vec![a.clone()], vec![family.clone()])
                .map_err(|e| e.to_string())?;
            for x in 0..1u64 << n {
                ensure(frame.member_at(0, 0, Subset(x)) == up.contains(&x), || format!("membership differs for {family:?}"))?;
            }
            families += 1;
        }
    }
    Ok(format!("{trees} trees (<= 5 moments), {families} generator families (|W| <= 4) agree"))
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("fixture suite", fixture_suite),
        ("soundness fuzz", soundness),
        ("definability converses", definability_converses),
        ("definitional equivalence", definitional_equivalence),
        ("translation theorem", translation_theorem),
        ("bounded validity", bounded_validity),
        ("oracle cross-checks", oracle_cross_checks),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(msg) => println!("PASS {} {name}: {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name}: {msg}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
