//! The release gate. Each numbered criterion runs at full scale and prints
//! one line; the test fails if any criterion does. Run with --nocapture to
//! watch the lines as they complete.

use std::time::{Duration, Instant};

use orthopair::{run_suite, Ring, SuiteOutcome};

struct Run {
    ring: Ring,
    cases: u64,
    max_rank: usize,
    budget: Option<Duration>,
}

struct Gate {
    lines: Vec<String>,
    all_ok: bool,
}

impl Gate {
    fn new() -> Self {
        Gate {
            lines: Vec::new(),
            all_ok: true,
        }
    }

    fn record(&mut self, number: usize, label: &str, ok: bool, detail: String) {
        let verdict = if ok { "[PASS]" } else { "[FAIL]" };
        let line = format!("{verdict} criterion {number}: {label} ({detail})");
        println!("{line}");
        self.lines.push(line);
        self.all_ok &= ok;
    }

    fn suite(&mut self, number: usize, label: &str, name: &str, run: Run) -> SuiteOutcome {
        let start = Instant::now();
        let outcome = run_suite(name, run.ring, run.cases, 7, run.max_rank)
            .expect("suite parameters are valid");
        let elapsed = start.elapsed();
        let within = run.budget.is_none_or(|b| elapsed < b);
        let ok = outcome.passed() && within;
        let mut detail = format!(
            "{} cases over {}, {} failures, {:.2}s",
            outcome.cases_run,
            run.ring.name(),
            outcome.failures.len(),
            elapsed.as_secs_f64()
        );
        if let Some(b) = run.budget {
            detail.push_str(&format!(" of {}s budget", b.as_secs()));
        }
        for f in outcome.failures.iter().take(3) {
            detail.push_str(&format!("; case {}: {}", f.case, f.message));
        }
        self.record(number, label, ok, detail);
        outcome
    }
}

fn qq(cases: u64, max_rank: usize) -> Run {
    Run {
        ring: Ring::Rational,
        cases,
        max_rank,
        budget: None,
    }
}

fn zz(cases: u64, max_rank: usize) -> Run {
    Run {
        ring: Ring::Integer,
        cases,
        max_rank,
        budget: None,
    }
}

#[test]
fn acceptance() {
    let mut gate = Gate::new();

    gate.suite(
        1,
        "biorthogonal closure recovers every saturated submodule",
        "biorthogonality",
        Run {
            budget: Some(Duration::from_secs(10)),
            ..qq(500, 6)
        },
    );

    gate.suite(
        2,
        "orthogonal dimensions satisfy all four codimension identities",
        "codim",
        qq(500, 6),
    );

    gate.suite(
        3,
        "rank plus kernel dimension is the ambient dimension over the rationals",
        "dimension",
        qq(500, 6),
    );
    gate.suite(
        3,
        "rank plus kernel dimension is the ambient dimension over the integers",
        "dimension",
        zz(500, 6),
    );

    gate.suite(
        4,
        "left, right, and quotient insertion ranks agree",
        "insertion",
        qq(500, 6),
    );

    gate.suite(
        5,
        "complementary submodules induce dual projector decompositions",
        "dualdecomp",
        qq(200, 6),
    );

    gate.suite(
        6,
        "quotient by both kernels is nondegenerate with matching rank",
        "quotientnondeg",
        qq(200, 6),
    );

    gate.suite(
        7,
        "isotropic submodules split off one hyperbolic plane per generator",
        "witt",
        Run {
            budget: Some(Duration::from_secs(30)),
            ..qq(200, 10)
        },
    );

    gate.suite(
        8,
        "cofactor partners pair to the determinant",
        "partner",
        qq(200, 8),
    );

    gate.suite(
        9,
        "smith factorizations are exact, unimodular, and divisibility-chained",
        "snf",
        zz(500, 6),
    );

    gate.suite(
        10,
        "constant modules satisfy both axioms on every cover and broken fixtures fail as built",
        "sheaf",
        qq(1, 2),
    );

    assert!(
        gate.all_ok,
        "acceptance gate failed:\n{}",
        gate.lines.join("\n")
    );
}
