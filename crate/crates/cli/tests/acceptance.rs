//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::Instant;

use serde_json::Value;
use tripods::census::CensusSample;
use tripods::par::{map_ordered, Execution};
use tripods::topology::{region_count, self_intersections};
use tripods::{census, CensusConfig, LatticeSpec, QuadraticNumber, Tripod};

type Q = QuadraticNumber;

const THREADS: [&str; 3] = ["1", "4", "8"];

fn run(args: &[&str], threads: &str) -> String {
    let out = Command::new(env!("CARGO_BIN_EXE_tripods"))
        .args(args)
        .env("TRIPOD_THREADS", threads)
        .output()
        .expect("run tripods");
    assert!(out.status.success(), "tripods {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn parse(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

fn without_timestamp(text: &str) -> String {
    let mut v = parse(text);
    v.as_object_mut().unwrap().remove("timestamp");
    v.to_string()
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

const GOLDEN_ARGS: [&str; 7] = ["census", "--lattice", "gaussian", "--radius", "35", "--mode", "appendix"];
const CONVERGENCE_ARGS: [&str; 5] = ["convergence", "--lattice", "gaussian", "--radii", "10,20,35"];
const INSPECT_ARGS: [&str; 3] = ["inspect", "--coords", "1,0,0,1"];
const NONREDUCED_ARGS: [&str; 5] = ["nonreduced", "--lattice", "eisenstein", "--radius", "40"];

fn volume_args(seed: &str) -> [&str; 7] {
    ["volume", "--samples", "1000000", "--seed", seed, "--slice-trials", "10000"]
}

const SEEDS: [&str; 10] = ["1", "2", "3", "4", "5", "6", "7", "8", "9", "10"];

fn golden_count() -> Outcome {
    let start = Instant::now();
    let v = parse(&run(&GOLDEN_ARGS, "4"));
    let secs = start.elapsed().as_secs_f64();
    let primitive = v["payload"]["counts"]["primitive"].as_u64().unwrap();
    let d = &v["payload"]["diagnostics"];
    outcome(
        primitive == 312_488 && secs < 60.0,
        format!(
            "primitive = {primitive} (lemma filter {}, largest-angle ties {}, sector ties {}), {secs:.2} s",
            d["lemma_primitive"], d["largest_angle_ties"], d["sector_boundary_ties"]
        ),
    )
}

fn asymptotic_error() -> Outcome {
    let v = parse(&run(&CONVERGENCE_ARGS, "4"));
    let rows = v["payload"]["rows"].as_array().unwrap();
    let err: Vec<f64> = rows.iter().map(|r| r["error"].as_f64().unwrap()).collect();
    let target = 0.00124129370635984;
    let pass = (err[2] - target).abs() <= 1e-9 && err[2] < err[0] && err[2] < err[1];
    outcome(pass, format!("errors at R = 10, 20, 35: {:.6e}, {:.6e}, {:.15e}", err[0], err[1], err[2]))
}

fn fermat_exactness() -> Outcome {
    let v = parse(&run(&INSPECT_ARGS, "4"));
    let p = &v["payload"]["fermat_point"];
    let exact_half = |c: &Value| c["rational"] == "1/2" && c["root3"] == "-1/6";
    let pass = v["payload"]["exact"] == true && exact_half(&p["x"]) && exact_half(&p["y"]);
    outcome(pass, format!("p = ({} + ({})√3)(1 + i)", p["x"]["rational"].as_str().unwrap_or("?"), p["x"]["root3"].as_str().unwrap_or("?")))
}

fn samples(lattice: LatticeSpec, radius: f64, threads: usize) -> Vec<CensusSample> {
    census(&CensusConfig::new(lattice, radius).threads(threads).samples(usize::MAX))
        .unwrap()
        .samples
        .unwrap()
}

fn length_identity(threads: usize) -> (bool, String) {
    let mut checked = 0;
    let mut worst_sum = 0f64;
    let mut worst_volume = 0f64;
    for lattice in [LatticeSpec::gaussian(), LatticeSpec::eisenstein()] {
        let all = samples(lattice, 15.0, threads);
        let rows = map_ordered(&all, Execution::with_threads(threads), |s| {
            let t = Tripod::<Q>::new(s.coords, &lattice).unwrap();
            let legs: f64 = t.leg_lengths.iter().sum();
            let u = t.u.x.to_f64().hypot(t.u.y.to_f64());
            let l2: f64 = t.leg_lengths.iter().map(|l| l * l).sum();
            let volume = 3f64.sqrt() / 4.0 * (t.length_sq.to_f64() - l2);
            let expected = t.index as f64 * lattice.covolume();
            ((legs - u).abs() / u, (volume - expected).abs() / expected)
        });
        for (a, b) in rows {
            worst_sum = worst_sum.max(a);
            worst_volume = worst_volume.max(b);
            checked += 1;
        }
    }
    let pass = worst_sum <= 1e-9 && worst_volume <= 1e-9;
    (pass, format!("{checked} tripods, worst relative error: leg sum {worst_sum:.2e}, volume {worst_volume:.2e}"))
}

type TopologyRow = (i64, Option<(u64, u64)>, bool);

fn topology_rows(threads: usize) -> Vec<TopologyRow> {
    let mut out = Vec::new();
    for lattice in [LatticeSpec::gaussian(), LatticeSpec::eisenstein()] {
        let all: Vec<_> = samples(lattice, 13.0, threads).into_iter().filter(|s| s.length_sq <= 144.0 + 1e-9).collect();
        out.extend(map_ordered(&all, Execution::with_threads(threads), |s| {
            let t = Tripod::<Q>::new(s.coords, &lattice).unwrap();
            let r = self_intersections(&t, &lattice).unwrap();
            let regions = region_count(&r);
            if r.degenerate {
                (t.index, None, regions.is_err())
            } else {
                (t.index, Some((r.intersections, regions.unwrap_or(0))), true)
            }
        }));
    }
    out
}

fn topology_oracle(rows: &[TopologyRow]) -> Outcome {
    let mut transverse = 0;
    let mut degenerate = 0;
    let mut wrong = 0;
    for &(n, counts, flagged_ok) in rows {
        match counts {
            Some((k, regions)) => {
                transverse += 1;
                if k as i64 != n - 1 || regions as i64 != n {
                    wrong += 1;
                }
            }
            None => {
                degenerate += 1;
                if !flagged_ok {
                    wrong += 1;
                }
            }
        }
    }
    outcome(wrong == 0, format!("{transverse} transverse, {degenerate} flagged degenerate, {wrong} miscounted"))
}

fn volume_monte_carlo() -> Outcome {
    let reference = 3f64.sqrt() * PI / 24.0;
    let mut within = 0;
    let mut slices_ok = true;
    let mut zs = Vec::new();
    for seed in SEEDS {
        let v = parse(&run(&volume_args(seed), "4"));
        let vol = &v["payload"]["volume"];
        let est = vol["estimate"].as_f64().unwrap();
        let se = vol["standard_error"].as_f64().unwrap();
        let z = (est - reference) / se;
        zs.push(format!("{z:.2}"));
        if z.abs() < 3.0 {
            within += 1;
        }
        for s in v["payload"]["slices"].as_array().unwrap() {
            slices_ok &= s["counterexamples"] == 0 && s["trials"] == 10000;
        }
    }
    outcome(
        within >= 9 && slices_ok,
        format!("{within}/10 seeds within 3 SE (z = {}), slice counterexamples: {}", zs.join(" "), if slices_ok { "none" } else { "found" }),
    )
}

fn eisenstein_totals() -> (Outcome, Outcome) {
    let v = parse(&run(&NONREDUCED_ARGS, "4"));
    let p = &v["payload"];
    let all = p["all_over_r4"].as_f64().unwrap();
    let nonreduced = p["nonreduced_over_r4"].as_f64().unwrap();
    let target = PI / 12.0;
    let off = (all - target).abs() / target;
    (
        outcome(off <= 0.03, format!("all/R^4 = {all:.7} vs pi/12 = {target:.7} ({:.1}% off)", off * 100.0)),
        outcome(nonreduced >= 0.05, format!("nonreduced/R^4 = {nonreduced:.7}")),
    )
}

fn determinism(topology: &[TopologyRow]) -> Outcome {
    let mut commands: Vec<Vec<&str>> =
        vec![GOLDEN_ARGS.to_vec(), CONVERGENCE_ARGS.to_vec(), INSPECT_ARGS.to_vec(), NONREDUCED_ARGS.to_vec()];
    commands.extend(SEEDS.iter().map(|s| volume_args(s).to_vec()));
    let mut mismatches = Vec::new();
    for args in &commands {
        let reference = without_timestamp(&run(args, "1"));
        for threads in THREADS.iter().chain(["4"].iter()) {
            if without_timestamp(&run(args, threads)) != reference {
                mismatches.push(format!("{} @ {threads}", args.join(" ")));
            }
        }
    }
    let (lengths_1, _) = length_identity(1);
    for threads in [4, 8] {
        if topology_rows(threads) != topology {
            mismatches.push(format!("topology sweep @ {threads}"));
        }
        if length_identity(threads).0 != lengths_1 {
            mismatches.push(format!("length identity @ {threads}"));
        }
    }
    let runs = commands.len() * 4;
    outcome(mismatches.is_empty(), format!("{runs} command runs compared, mismatches: {mismatches:?}"))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |name: &str, o: Outcome| {
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    };
    report("1 golden count", golden_count());
    report("2 asymptotic error", asymptotic_error());
    report("3 fermat point exactness", fermat_exactness());
    let (pass, detail) = length_identity(4);
    report("4 length identity", outcome(pass, detail));
    let topology = topology_rows(1);
    report("5 topology oracle", topology_oracle(&topology));
    report("6 volume monte carlo", volume_monte_carlo());
    let (total, nonreduced) = eisenstein_totals();
    report("7a eisenstein total", total);
    report("7b eisenstein nonreduced", nonreduced);
    report("8 determinism", determinism(&topology));
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
