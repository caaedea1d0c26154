//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Every value and tolerance is pinned here.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use frcode::{
    corpus, corpus_code, derive_params, generate_random, generate_strong, k_fr_exact, k_fr_greedy,
    k_star_exact, k_star_greedy, parse_frc, rate, rate_profile, repair_degree_exact,
    repair_degree_greedy, repair_report, validate, write_frc, FrCode, GenSpec, GreedyOutcome, Mode,
    NodeId, PacketId, TraceOutcome, DEFAULT_SUBSET_CAP as CAP,
};

#[derive(Default)]
struct Criterion {
    failures: Vec<String>,
}

impl Criterion {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, what: &str, actual: T, expected: T) {
        if actual != expected {
            self.failures
                .push(format!("{what}: got {actual:?}, expected {expected:?}"));
        }
    }

    fn within(&mut self, what: &str, elapsed: Duration, limit: Duration) {
        self.check(
            elapsed < limit,
            format!("{what}: took {elapsed:?}, limit {limit:?}"),
        );
    }
}

fn cli(args: &[&str]) -> (Option<i32>, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_frcode"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code(), String::from_utf8(out.stdout).unwrap())
}

fn corpus_files(dir: &Path) -> Vec<(&'static str, PathBuf)> {
    corpus()
        .into_iter()
        .map(|(name, code)| {
            let path = dir.join(format!("{name}.frc"));
            std::fs::write(&path, write_frc(&code)).unwrap();
            (name, path)
        })
        .collect()
}

fn random_family(count: usize) -> Vec<FrCode> {
    let mut codes = Vec::with_capacity(count);
    let mut seed = 0u64;
    while codes.len() < count {
        let n = 2 + (seed % 9) as usize;
        let theta = 3 + (seed / 9 % 13) as usize;
        let rho = 2 + (seed / 117 % 2) as usize;
        if rho <= n {
            if let Ok(code) = generate_random(&GenSpec::random(n, theta, rho, seed)) {
                codes.push(code);
            }
        }
        seed += 1;
    }
    codes
}

fn corpus_fidelity(dir: &Path) -> Criterion {
    let mut c = Criterion::default();
    for (name, code) in corpus() {
        let text = write_frc(&code);
        match parse_frc(&text) {
            Ok(back) => {
                c.check(back == code, format!("{name}: parse(write(code)) != code"));
                c.check(
                    write_frc(&back) == text,
                    format!("{name}: text not byte-exact"),
                );
            }
            Err(e) => c.check(false, format!("{name}: {e}")),
        }
    }
    let files = corpus_files(dir);
    let (status, out) = cli(&["analyze", files[0].1.to_str().unwrap(), "--json"]);
    c.eq("analyze table1 exit", status, Some(0));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap_or_default();
    c.eq("table1 alpha", v["params"]["alpha"].as_u64(), Some(4));
    c.eq("table1 delta", v["params"]["delta"].as_u64(), Some(4));
    c.eq(
        "table1 Eq.1 residual",
        v["validation"]["eq1_residual"].as_i64(),
        Some(0),
    );
    c
}

fn reconstruction_exact() -> Criterion {
    let mut c = Criterion::default();
    let t1 = corpus_code("table1").unwrap();
    let start = Instant::now();
    c.eq("table1 k*", k_star_exact(&t1, CAP), Ok(2));
    c.eq("table1 k_FR", k_fr_exact(&t1, CAP), Ok(4));
    c.eq("table1 R(3)", rate(&t1, 3, CAP), Ok(4));
    c.eq("table1 R(4)", rate(&t1, 4, CAP), Ok(6));
    c.within(
        "table1 exact degrees",
        start.elapsed(),
        Duration::from_secs(1),
    );
    c
}

fn algorithm1_literal() -> Criterion {
    let mut c = Criterion::default();
    match k_star_greedy(&corpus_code("table2").unwrap()) {
        Ok(run) => {
            c.eq("table2 k*_upp", run.value, 3);
            c.eq(
                "table2 seeds",
                run.seeds,
                vec![NodeId::new(1), NodeId::new(4)],
            );
            let counters: Vec<usize> = run.traces.iter().map(|t| t.counter()).collect();
            c.eq("table2 seed-run counters", counters, vec![3, 3]);
        }
        Err(e) => c.check(false, format!("table2: {e}")),
    }
    let t3 = corpus_code("table3").unwrap();
    match k_star_greedy(&t3) {
        Ok(run) => {
            let counters: Vec<usize> = run.traces.iter().map(|t| t.counter()).collect();
            c.eq(
                &format!("table3 k*_upp (seed-run counters {counters:?})"),
                run.value,
                3,
            );
        }
        Err(e) => c.check(false, format!("table3: {e}")),
    }
    c.eq("table3 k* exact", k_star_exact(&t3, CAP), Ok(2));
    c
}

fn algorithm3_literal() -> Criterion {
    let mut c = Criterion::default();
    let m = corpus_code("m11x8").unwrap();
    match repair_degree_greedy(&m, NodeId::new(5)) {
        Ok(r) => {
            c.eq("m11x8 d_5", r.degree, 2);
            let groups: Vec<Vec<PacketId>> = r.groups.into_iter().map(|g| g.packets).collect();
            c.eq(
                "m11x8 node 5 groups",
                groups,
                vec![
                    vec![PacketId::new(1), PacketId::new(4)],
                    vec![PacketId::new(2), PacketId::new(3)],
                ],
            );
        }
        Err(e) => c.check(false, format!("m11x8 node 5: {e}")),
    }
    let t1 = corpus_code("table1").unwrap();
    for (node, expected) in [(2, 2), (5, 2), (6, 2), (7, 1), (1, 2), (3, 2), (4, 2)] {
        let i = NodeId::new(node);
        c.eq(
            &format!("table1 greedy d_{node}"),
            repair_degree_greedy(&t1, i).map(|r| r.degree),
            Ok(expected),
        );
        if [1, 3, 4].contains(&node) {
            c.eq(
                &format!("table1 exact d_{node}"),
                repair_degree_exact(&t1, i, CAP),
                Ok(expected),
            );
        }
    }
    c
}

fn oracle_consistency() -> Criterion {
    let mut c = Criterion::default();
    let start = Instant::now();
    let codes = random_family(200);
    for (idx, code) in codes.iter().enumerate() {
        let tag = format!(
            "code #{idx} (n={}, theta={}, rho={})",
            code.n(),
            code.theta(),
            code.rho()
        );
        c.check(
            code.n() <= 10 && code.theta() <= 15,
            format!("{tag}: outside family"),
        );

        let star_exact = k_star_exact(code, CAP).unwrap();
        let star_greedy = k_star_greedy(code).unwrap().value;
        c.check(
            star_exact <= star_greedy,
            format!("{tag}: (a) k* {star_exact} > greedy {star_greedy}"),
        );

        let profile = rate_profile(code, CAP).unwrap();
        let via_rate = profile
            .iter()
            .position(|&r| r + 1 >= code.theta())
            .map(|k| k + 1);
        let direct = k_fr_exact(code, CAP).unwrap();
        c.check(
            via_rate == Some(direct),
            format!("{tag}: (b) k_FR {direct} vs rate route {via_rate:?}"),
        );

        c.check(
            profile.windows(2).all(|w| w[0] <= w[1]),
            format!("{tag}: (c) profile decreases"),
        );
        c.check(
            profile.last() == Some(&code.theta()),
            format!("{tag}: (c) R(n) != theta"),
        );

        let params = derive_params(code);
        let report = repair_report(code, Mode::Both, CAP).unwrap();
        for (i, node) in report.per_node.iter().enumerate() {
            let greedy = node.greedy.as_ref().and_then(|o| o.degree());
            let exact = node.exact.as_ref().and_then(|o| o.degree());
            if let (Some(g), Some(e)) = (greedy, exact) {
                let bound = params.alpha_i[i].min(code.n() - 1);
                c.check(
                    e <= g && g <= bound,
                    format!(
                        "{tag}: (d) node {} exact {e} greedy {g} bound {bound}",
                        i + 1
                    ),
                );
            }
        }
        c.check(
            validate(code).eq1_residual == 0,
            format!("{tag}: (e) residual"),
        );
    }
    c.eq("random codes checked", codes.len() >= 200, true);
    c.within(
        "oracle consistency",
        start.elapsed(),
        Duration::from_secs(60),
    );
    c
}

fn strong_generation() -> Criterion {
    let mut c = Criterion::default();
    let mut triples = Vec::new();
    'outer: for n in 2..=12usize {
        for rho in 2..=3usize.min(n) {
            for theta in 1..=24usize {
                if (rho * theta) % n == 0 {
                    triples.push((n, theta, rho));
                    if triples.len() == 50 {
                        break 'outer;
                    }
                }
            }
        }
    }
    c.eq("triples", triples.len(), 50);
    for (seed, &(n, theta, rho)) in triples.iter().enumerate() {
        let tag = format!("({n},{theta},{rho}) seed {seed}");
        match generate_strong(&GenSpec::strong(n, theta, rho, seed as u64)) {
            Ok(code) => {
                let p = derive_params(&code);
                c.check(p.delta == 0, format!("{tag}: delta {}", p.delta));
                c.check(
                    n * p.alpha == rho * theta,
                    format!("{tag}: n*alpha != rho*theta"),
                );
                c.check(validate(&code).ok, format!("{tag}: validation failed"));
            }
            Err(e) => c.check(false, format!("{tag}: {e}")),
        }
    }
    c
}

fn algorithm2_consistency() -> Criterion {
    let mut c = Criterion::default();
    let mut codes: Vec<(String, FrCode)> = corpus()
        .into_iter()
        .map(|(n, code)| (n.to_string(), code))
        .collect();
    codes.extend(
        random_family(50)
            .into_iter()
            .enumerate()
            .map(|(i, code)| (format!("random #{i}"), code)),
    );

    for (tag, code) in &codes {
        let run = k_fr_greedy(code);
        let mut completed = Vec::new();
        for trace in &run.traces {
            let missing = code.theta() - trace.steps.last().map_or(0, |s| s.covered.len());
            c.check(
                trace.counter() == trace.steps.len(),
                format!(
                    "{tag}: seed {} counter {} vs {} nodes",
                    trace.seed,
                    trace.counter(),
                    trace.steps.len()
                ),
            );
            match trace.outcome {
                TraceOutcome::Completed => {
                    c.check(
                        missing <= 1,
                        format!("{tag}: seed {} completed missing {missing}", trace.seed),
                    );
                    completed.push(trace.counter());
                }
                TraceOutcome::Failed => {
                    c.check(
                        missing >= 2,
                        format!("{tag}: seed {} failed missing {missing}", trace.seed),
                    );
                }
            }
        }
        let expected = completed
            .iter()
            .max()
            .map_or(GreedyOutcome::NoValidRun, |&v| GreedyOutcome::Value(v));
        c.check(
            run.value == expected,
            format!("{tag}: value {:?} vs {expected:?}", run.value),
        );
    }
    c.eq(
        "table1 literal k_FR greedy",
        k_fr_greedy(&corpus_code("table1").unwrap()).value,
        GreedyOutcome::Value(3),
    );
    c
}

fn determinism(dir: &Path) -> Criterion {
    let mut c = Criterion::default();
    let files = corpus_files(dir);
    let mut runs: Vec<Vec<String>> = Vec::new();
    for (_, path) in &files {
        let f = path.to_str().unwrap().to_string();
        for args in [
            vec!["analyze"],
            vec!["reconstruct", "--trace"],
            vec!["repair"],
            vec!["repair", "--node", "2"],
            vec!["rate", "-k", "2"],
            vec!["rate", "--profile"],
            vec!["matrix"],
        ] {
            let mut full = vec![args[0].to_string(), f.clone()];
            full.extend(args[1..].iter().map(|s| s.to_string()));
            runs.push(full);
        }
    }
    for (name, _) in &files {
        runs.push(vec!["corpus".into(), name.to_string()]);
    }
    runs.push(
        [
            "generate", "--n", "7", "--theta", "8", "--rho", "3", "--seed", "11",
        ]
        .map(String::from)
        .to_vec(),
    );
    runs.push(
        [
            "generate", "--n", "6", "--theta", "9", "--rho", "2", "--strong", "--seed", "4",
        ]
        .map(String::from)
        .to_vec(),
    );

    for mut args in runs {
        args.push("--json".into());
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let (s1, a) = cli(&refs);
        let (s2, b) = cli(&refs);
        c.check(s1 == s2 && a == b, format!("{args:?}: outputs differ"));
        c.check(
            a.starts_with("{\n  \"format\": 1,"),
            format!("{args:?}: not a report"),
        );
    }
    c
}

type Check<'a> = Box<dyn Fn() -> Criterion + 'a>;

fn main() -> ExitCode {
    let dir = tempfile::TempDir::new().unwrap();
    let criteria: Vec<(&str, Check)> = vec![
        (
            "1. corpus fidelity",
            Box::new(|| corpus_fidelity(dir.path())),
        ),
        ("2. reconstruction, exact", Box::new(reconstruction_exact)),
        (
            "3. k* greedy literal behaviour",
            Box::new(algorithm1_literal),
        ),
        (
            "4. repair greedy literal behaviour",
            Box::new(algorithm3_literal),
        ),
        (
            "5. oracle consistency over 200 random codes",
            Box::new(oracle_consistency),
        ),
        ("6. strong-code generation", Box::new(strong_generation)),
        (
            "7. k_FR greedy internal consistency",
            Box::new(algorithm2_consistency),
        ),
        (
            "8. determinism of --json output",
            Box::new(|| determinism(dir.path())),
        ),
    ];

    let mut failed = 0;
    for (name, run) in &criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        if result.failures.is_empty() {
            println!("[PASS] {name} ({elapsed:.2?})");
        } else {
            failed += 1;
            println!("[FAIL] {name} ({elapsed:.2?})");
            for f in result.failures.iter().take(20) {
                println!("         - {f}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
