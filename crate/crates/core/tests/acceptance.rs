//! Acceptance harness: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dlconn_core::counting::{component_count, count_n};
use dlconn_core::coxeter::{GeneratorSet, DEFAULT_GROUP_BOUND};
use dlconn_core::flag::GroupRealization;
use dlconn_core::report::{Verdict, VerificationReport};
use dlconn_core::twist::TwistedDatum;
use dlconn_core::verify::{
    check_closure_rational_counts, check_component_fibers_escalating, check_descent_chain, check_lemma_cell_emptiness,
    check_oracle_consistency, check_theorem_connectivity, DEFAULT_LEVEL_CAP,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const SPLIT_GROUPS: [&str; 8] = ["A1", "A2", "A3", "A4", "B2", "B3", "D4", "G2"];
const TWISTED: [(&str, &str); 5] = [("A2", "2A2"), ("A3", "2A3"), ("A4", "2A4"), ("D4", "2D4"), ("D4", "3D4")];

fn all_data() -> Vec<TwistedDatum> {
    SPLIT_GROUPS
        .iter()
        .map(|g| TwistedDatum::parse(g, "1").unwrap())
        .chain(TWISTED.iter().map(|(g, t)| TwistedDatum::parse(g, t).unwrap()))
        .collect()
}

fn realization(spec: &str) -> GroupRealization {
    GroupRealization::parse(spec, &[1]).unwrap()
}

fn set(gens: &[usize]) -> GeneratorSet {
    gens.iter().copied().collect()
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn expect_pass(report: &VerificationReport) -> Result<(), String> {
    require(report.verdict == Verdict::Pass, || {
        format!("{} on {:?}: {:?} {:?}", report.check_name, report.parameters, report.verdict, report.witnesses)
    })
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let spent = start.elapsed();
    require(spent <= limit, || format!("{what} took {spent:?}, limit {limit:?}"))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for t in all_data() {
        let report = t.verify_steinberg(DEFAULT_GROUP_BOUND).map_err(|e| e.to_string())?;
        expect_pass(&report)?;
        checked += 1;
    }
    let t = TwistedDatum::parse("A3", "2A3").unwrap();
    let fixed = t.fixed_subgroup(DEFAULT_GROUP_BOUND).map_err(|e| e.to_string())?;
    let mut gens: Vec<String> = fixed.generators.iter().map(|g| g.to_word_string()).collect();
    gens.sort();
    require(gens == ["0.2", "1"], || format!("2A3 generators {gens:?}"))?;
    require(fixed.coxeter_matrix[0][1] == 4, || format!("2A3 matrix {:?}", fixed.coxeter_matrix))?;
    let report = t.verify_steinberg(DEFAULT_GROUP_BOUND).map_err(|e| e.to_string())?;
    require(report.param_u64("pairs_compared") == Some(64), || "2A3 Bruhat pairs ≠ 64".into())?;
    within(start, Duration::from_secs(10), "Steinberg suite")?;
    Ok(format!("{checked} data; 2A3 generators {{s2, s1s3}}, m = 4, 64 pairs; {:?}", start.elapsed()))
}

fn criterion_2() -> Outcome {
    let mut lines = Vec::new();
    for kind in ["GL2", "GL3", "GL4", "U3", "U4"] {
        for q in [2u64, 3] {
            let r = realization(&format!("{kind}@q={q}"));
            let t = r.twisted();
            let expected = count_n(t, t.all_generators()).map_err(|e| e.to_string())?.evaluate_u64(q).unwrap();
            let found = r.rational_flags().map_err(|e| e.to_string())?.len() as u64;
            require(found == expected, || format!("{kind}@q={q}: {found} rational flags, N(W) = {expected}"))?;
            lines.push(format!("{kind}@{q}={found}"));
        }
    }
    let mut elements = 0;
    for t in all_data() {
        for w in t.group().enumerate(DEFAULT_GROUP_BOUND).unwrap() {
            component_count(&t, &w).map_err(|e| format!("{} w = {w}: {e}", t.group().datum()))?;
            elements += 1;
        }
    }
    Ok(format!("{}; N(W^w) | N(W) for {elements} elements", lines.join(" ")))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let cases: [(&str, &[usize], usize, usize); 5] = [
        ("GL3@q=2", &[0], 7, 3),
        ("GL3@q=2", &[0, 1], 1, 21),
        ("U4@q=2", &[1], 45, 3),
        ("U4@q=2", &[0], 27, 5),
        ("U4@q=2", &[0, 1], 1, 135),
    ];
    for (spec, gens, components, size) in cases {
        let r = realization(spec);
        let report = check_theorem_connectivity(&r, set(gens)).map_err(|e| e.to_string())?;
        expect_pass(&report)?;
        let got = (report.param_u64("components"), report.parameters["component_sizes"].clone());
        require(got == (Some(components as u64), serde_json::json!([size])), || {
            format!("{spec} I = {gens:?}: {got:?}, expected {components} of size {size}")
        })?;
        let connected = report.parameters["connected"].as_bool();
        require(connected == Some(r.twisted().is_connected_union(set(gens))), || format!("{spec} {gens:?} criterion"))?;
    }
    within(start, Duration::from_secs(30), "graph checks")?;
    Ok(format!("GL3 7x3, 1x21; U4 45x3, 27x5, 1x135; {:?}", start.elapsed()))
}

fn criterion_4() -> Outcome {
    let cases = [("GL3@q=2", 0usize, 2u32, 7u64), ("GL2@q=2", 0, 2, 1), ("U3@q=2", 0, 1, 1)];
    let mut out = Vec::new();
    for (spec, s, m, images) in cases {
        let r = realization(spec);
        let w = r.twisted().group().generator(s);
        let report = check_component_fibers_escalating(&r, &w, m, DEFAULT_LEVEL_CAP).map_err(|e| e.to_string())?;
        expect_pass(&report)?;
        require(report.param_u64("images") == Some(images), || format!("{spec}: {:?}", report.parameters))?;
        out.push(format!("{spec} {images} (m={})", report.param_u64("m").unwrap()));
    }
    Ok(out.join(", "))
}

fn criterion_5() -> Outcome {
    let cases = [("GL3@q=2", 7u64, 3u64), ("U4@q=2", 27, 5)];
    for (spec, groups, size) in cases {
        let r = realization(spec);
        let w = r.twisted().group().generator(0);
        let report = check_closure_rational_counts(&r, &w).map_err(|e| e.to_string())?;
        expect_pass(&report)?;
        require(
            report.param_u64("groups") == Some(groups) && report.parameters["group_sizes"] == serde_json::json!([size]),
            || format!("{spec}: {:?}", report.parameters),
        )?;
    }
    Ok("GL3 7 groups of 3, U4 27 groups of 5".into())
}

fn criterion_6() -> Outcome {
    let cases: [(&str, &[u32]); 4] = [("GL2@q=2", &[2, 3]), ("GL3@q=2", &[2, 3]), ("U3@q=2", &[1]), ("U4@q=2", &[1])];
    let mut runs = 0;
    let mut points = 0;
    for (spec, levels) in cases {
        let r = GroupRealization::parse(spec, levels).unwrap();
        for &m in levels {
            for s in 0..r.n() - 1 {
                let report = check_lemma_cell_emptiness(&r, s, m).map_err(|e| e.to_string())?;
                expect_pass(&report)?;
                points += report.param_u64("points").unwrap();
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} runs, {points} points of X(s), none in forbidden cells"))
}

fn criterion_7() -> Outcome {
    let mut count = 0;
    for t in all_data() {
        for w in t.group().enumerate(DEFAULT_GROUP_BOUND).unwrap() {
            let one = component_count(&t, &w).map_err(|e| e.to_string())?.evaluate_u64(1) == Some(1)
                && component_count(&t, &w).unwrap().degree() == 0;
            let irreducible = t.is_irreducible(&w);
            let closure = t.sigma_closure(w.support()) == t.all_generators();
            require(one == irreducible && irreducible == closure, || {
                format!("{} w = {w}: count=1 {one}, irreducible {irreducible}, closure {closure}", t.group().datum())
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} elements"))
}

fn criterion_8() -> Outcome {
    let mut runs = 0;
    for t in all_data() {
        for i in GeneratorSet::all_subsets(t.rank()) {
            if !t.is_connected_union(i) {
                continue;
            }
            let report = check_descent_chain(&t, i, DEFAULT_GROUP_BOUND).map_err(|e| e.to_string())?;
            expect_pass(&report)?;
            runs += 1;
        }
    }
    Ok(format!("{runs} (datum, I) pairs"))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    for (spec, m) in [("GL3@q=2", 2u32), ("GL3@q=2", 1), ("U4@q=2", 1)] {
        let r = GroupRealization::parse(spec, &[m]).unwrap();
        let report = check_oracle_consistency(&r, m).map_err(|e| e.to_string())?;
        expect_pass(&report)?;
    }
    Ok(format!("GL3@2 m=1,2 and U4@2 m=1 exhaustive; {:?}", start.elapsed()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("Steinberg suite", criterion_1),
        ("counting identities", criterion_2),
        ("theorem graph check", criterion_3),
        ("component-count formula", criterion_4),
        ("closure rational counts", criterion_5),
        ("lemma emptiness", criterion_6),
        ("irreducibility equivalence", criterion_7),
        ("descent property", criterion_8),
        ("oracle self-consistency", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({why})", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
