//! Acceptance criteria 1 to 8, one line each. Runs without the libtest
//! harness so the summary is printed even when everything passes.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;

use hyperperc::clusters::{BondBoundary, SiteBoundary};
use hyperperc::contours::{
    complementarity_check, derive, eta_structure_check, face_parity_check, ContourShape,
};
use hyperperc::experiments::{
    estimate_pc_site, growth_trend, run_sweep, Boundary, ExperimentConfig, Model, PcPlan,
    RunRecord, Trend,
};
use hyperperc::oracle::{
    coupling_check, enumerate_fk, enumerate_ising, holley_check, sampler_gof, tiny_graph, Cells,
    ExactMeasure, GofPlan, SamplerCase,
};
use hyperperc::planar_map::{build_ball, small, BallSpec, LatticeMaps, TilingSpec};
use hyperperc::samplers::{
    coupling_to_edge_weight, h_ising, ising_window, pcwl_bound, sample_bernoulli, thresholds,
    xor_window, CouplingParams, Graph, RngSpec,
};
use hyperperc::xor::{dual_coupling, z_contour_expansion, z_double_ising};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ball(p: usize, q: usize, r: u32) -> hyperperc::planar_map::CombinatorialMap {
    build_ball(&BallSpec::new(TilingSpec::regular(p, q).unwrap(), r)).unwrap()
}

fn coupling() -> Outcome {
    let mut graphs: Vec<(&str, Graph)> = ["k2", "triangle", "star4"]
        .into_iter()
        .map(|n| (n, tiny_graph(n).unwrap()))
        .collect();
    graphs.push(("{4,4} R=1", Graph::new(&ball(4, 4, 1))));
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for (name, g) in &graphs {
        for boundary in [BondBoundary::FreeRC, BondBoundary::WiredRC] {
            for p in [0.2, 0.5, 0.8] {
                let r = coupling_check(g, p, boundary).map_err(|e| e.to_string())?;
                ensure(r.tv <= 1e-10, || {
                    format!("{name} {boundary:?} p={p}: tv {:e}", r.tv)
                })?;
                worst = worst.max(r.tv);
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} cases, max tv {worst:.1e}"))
}

fn xor_duality() -> Outcome {
    let mut worst_z: f64 = 0.0;
    let graphs = ["triangle", "square", "diamond", "grid2x2"];
    for name in graphs {
        let map = small::by_name(name).unwrap();
        for j in [0.05, 0.3, 0.9, 1.7] {
            let a = z_double_ising(&map, j).map_err(|e| e.to_string())?;
            let b = z_contour_expansion(&map, j).map_err(|e| e.to_string())?;
            let rel = (a - b).abs() / a.abs();
            ensure(rel <= 1e-10, || {
                format!("{name} J={j}: relative gap {rel:e}")
            })?;
            worst_z = worst_z.max(rel);
        }
    }
    let mut rng = RngSpec::new(2, 0).rng();
    let (mut worst_inv, mut worst_id): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let k: f64 = rng.gen_range(0.01..3.0);
        let kk = dual_coupling(dual_coupling(k).unwrap()).unwrap();
        let inv = (kk - k).abs();
        ensure(inv <= 1e-12, || format!("K={k}: involution error {inv:e}"))?;
        let j = k;
        let kd = dual_coupling(j).unwrap();
        let lhs = 2.0 * (-2.0 * j).exp() / (1.0 + (-4.0 * j).exp());
        let rhs = (1.0 - (-4.0 * kd).exp()) / (1.0 + (-4.0 * kd).exp());
        let id = (lhs - rhs).abs();
        ensure(id <= 1e-12, || format!("J={j}: identity error {id:e}"))?;
        worst_inv = worst_inv.max(inv);
        worst_id = worst_id.max(id);
    }
    Ok(format!(
        "{} graphs max rel {worst_z:.1e}; involution {worst_inv:.1e}; identity {worst_id:.1e}",
        graphs.len()
    ))
}

fn structural() -> Outcome {
    let per_tiling = 10_000;
    let mut total_contours = 0usize;
    for (p, q) in [(3, 7), (4, 4)] {
        let maps = LatticeMaps::new(ball(p, q, 3)).unwrap();
        let g = Graph::new(&maps.primal);
        let mut rng = RngSpec::new(3, p as u64).rng();
        for i in 0..per_tiling {
            let density: f64 = rng.gen_range(0.0..1.0);
            let omega = sample_bernoulli(&g, density, &mut rng).unwrap();
            let tag = || format!("{{{p},{q}}} sample {i}");
            ensure(
                face_parity_check(&maps.primal, &omega).map_err(|e| e.to_string())?,
                || format!("{}: face parity", tag()),
            )?;
            let cfgs = derive(&omega, &maps).map_err(|e| e.to_string())?;
            ensure(complementarity_check(&maps, &cfgs), || {
                format!("{}: complementarity", tag())
            })?;
            let report =
                eta_structure_check(&maps, &cfgs).map_err(|e| format!("{}: {e}", tag()))?;
            ensure(
                report
                    .component_shapes
                    .iter()
                    .all(|s| *s != ContourShape::Other),
                || format!("{}: contour that is neither cycle nor boundary path", tag()),
            )?;
            total_contours += report.contour_count;
        }
    }
    Ok(format!(
        "2 x {per_tiling} configurations, {total_contours} contours"
    ))
}

fn holley() -> Outcome {
    let star = tiny_graph("star5").unwrap();
    let mut checks = 0;
    for j in [0.05, 0.1, 0.3, 0.7, 1.5] {
        let (lo, hi) = ising_window(j, 5);
        for boundary in [
            SiteBoundary::Free,
            SiteBoundary::AllPlus,
            SiteBoundary::AllMinus,
        ] {
            let mu = enumerate_ising(&star, j, boundary).unwrap();
            for p2 in [lo, 0.5 * lo, 0.01 * lo] {
                let nu2 = ExactMeasure::product_like(&mu, p2);
                let r = holley_check(&nu2, &mu).map_err(|e| e.to_string())?;
                ensure(r.holds, || {
                    format!("nu2 vs Ising, J={j} {boundary:?} p2={p2}")
                })?;
                checks += 1;
            }
            for p1 in [hi, 0.5 + 0.5 * hi, 1.0 - 0.01 * (1.0 - hi)] {
                let nu1 = ExactMeasure::product_like(&mu, p1);
                let r = holley_check(&mu, &nu1).map_err(|e| e.to_string())?;
                ensure(r.holds, || {
                    format!("Ising vs nu1, J={j} {boundary:?} p1={p1}")
                })?;
                checks += 1;
            }
        }
    }
    let k2 = tiny_graph("k2").unwrap();
    for j in [0.05, 0.3, 0.8, 2.0] {
        let xor = enumerate_ising(&k2, j, SiteBoundary::Free)
            .unwrap()
            .xor_square();
        let (lo, hi) = xor_window(j, k2.max_degree());
        let below =
            holley_check(&ExactMeasure::product_like(&xor, lo), &xor).map_err(|e| e.to_string())?;
        let above =
            holley_check(&xor, &ExactMeasure::product_like(&xor, hi)).map_err(|e| e.to_string())?;
        ensure(below.holds && above.holds, || {
            format!("XOR window on K2 at J={j}")
        })?;
        checks += 2;
    }
    let grid = Graph::new(&small::grid(2, 2));
    for j in [0.1, 0.5, 1.0] {
        let m = |b| enumerate_ising(&grid, j, b).unwrap().magnetization();
        let (minus, free, plus) = (
            m(SiteBoundary::AllMinus),
            m(SiteBoundary::Free),
            m(SiteBoundary::AllPlus),
        );
        ensure(minus <= free && free <= plus, || {
            format!("magnetization order at J={j}: {minus} {free} {plus}")
        })?;
        checks += 1;
    }
    Ok(format!("{checks} checks"))
}

fn sampler_correctness() -> Outcome {
    let j = 0.35;
    let p = coupling_to_edge_weight(j);
    let cases = [
        (SamplerCase::Bernoulli { p: 0.3 }, 1),
        (
            SamplerCase::Glauber {
                j,
                boundary: SiteBoundary::Free,
            },
            10,
        ),
        (
            SamplerCase::Glauber {
                j,
                boundary: SiteBoundary::AllPlus,
            },
            10,
        ),
        (
            SamplerCase::SwendsenWang {
                j,
                boundary: SiteBoundary::Free,
            },
            5,
        ),
        (
            SamplerCase::SwendsenWang {
                j,
                boundary: SiteBoundary::AllMinus,
            },
            5,
        ),
        (
            SamplerCase::FkHeatBath {
                p,
                q: 2.0,
                boundary: BondBoundary::FreeRC,
            },
            10,
        ),
        (
            SamplerCase::FkHeatBath {
                p,
                q: 2.0,
                boundary: BondBoundary::WiredRC,
            },
            10,
        ),
        (
            SamplerCase::EdwardsSokal {
                p,
                boundary: BondBoundary::FreeRC,
            },
            10,
        ),
        (
            SamplerCase::EdwardsSokal {
                p,
                boundary: BondBoundary::WiredRC,
            },
            10,
        ),
    ];
    let mut min_p: f64 = 1.0;
    let mut runs = 0;
    for name in ["triangle", "grid2x2"] {
        let g = tiny_graph(name).unwrap();
        for (i, (case, thinning)) in cases.iter().enumerate() {
            let plan = GofPlan {
                samples: 1_000_000,
                burn_in: 1000,
                thinning: *thinning,
                rng: RngSpec::new(5, i as u64),
            };
            let r = sampler_gof(&g, *case, &plan).map_err(|e| e.to_string())?;
            ensure(r.p_value > 0.01, || {
                format!("{name} {case:?}: p-value {:.4}", r.p_value)
            })?;
            min_p = min_p.min(r.p_value);
            runs += 1;
        }
        for boundary in [BondBoundary::FreeRC, BondBoundary::WiredRC] {
            let fk = enumerate_fk(&g, 0.35, 1.0, boundary).map_err(|e| e.to_string())?;
            let product = ExactMeasure::product(Cells::Bonds, g.num_edges(), 0.35);
            let gap = fk
                .weights
                .iter()
                .zip(&product.weights)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            ensure(gap < 1e-14, || {
                format!("{name} {boundary:?}: FK q=1 differs from product by {gap:e}")
            })?;
        }
    }
    Ok(format!(
        "{runs} GOF runs at 1e6 samples, min p-value {min_p:.3}; FK q=1 exact"
    ))
}

fn sweep(model: Model, param: f64, boundary: Boundary) -> Result<Vec<RunRecord>, String> {
    let cfg = ExperimentConfig {
        tiling: TilingSpec::regular(3, 7).unwrap(),
        radii: vec![2, 3, 4, 5],
        model,
        grid: vec![param],
        boundary,
        chains: 8,
        sweeps: 500,
        burn_in: 200,
        thinning: 5,
        seed: 7,
        q: None,
        dynamics: None,
    };
    run_sweep(&cfg, None).map_err(|e| e.to_string())
}

fn trend_of(records: &[RunRecord], estimator: &str) -> Result<(Trend, f64), String> {
    let r = growth_trend(records, estimator).map_err(|e| e.to_string())?;
    Ok((r.trend, r.confidence))
}

fn phenomenology() -> Outcome {
    let tiling = TilingSpec::regular(3, 7).unwrap();
    let grid: Vec<f64> = (1..20).map(|i| i as f64 * 0.05).collect();
    let pc = estimate_pc_site(
        &tiling,
        &[2, 3, 4, 5],
        &PcPlan {
            grid,
            samples: 400,
            seed: 1,
        },
    )
    .map_err(|e| e.to_string())?;

    let bern = sweep(Model::Bernoulli, 0.5, Boundary::Free)?;
    let (a, ca) = trend_of(&bern, "boundary_plus_clusters")?;
    ensure(a == Trend::Increasing, || {
        format!("(a) Bernoulli trend {a:?}")
    })?;

    let h = h_ising(pc.estimate).map_err(|e| e.to_string())?;
    let j = 0.9 * h / 7.0;
    let ising = sweep(Model::Ising, j, Boundary::Free)?;
    let (bp, _) = trend_of(&ising, "boundary_plus_clusters")?;
    let (bm, _) = trend_of(&ising, "boundary_minus_clusters")?;
    ensure(bp == Trend::Increasing && bm == Trend::Increasing, || {
        format!("(b) Ising at J={j:.4}: plus {bp:?}, minus {bm:?}")
    })?;

    let cold = sweep(Model::Ising, 2.0, Boundary::Plus)?;
    let (c, _) = trend_of(&cold, "boundary_minus_clusters")?;
    ensure(c != Trend::Increasing, || {
        format!("(c) minus proxy trend {c:?}")
    })?;
    let dominant =
        growth_trend(&cold, "largest_plus_cluster_fraction").map_err(|e| e.to_string())?;
    let weakest = dominant.means.iter().copied().fold(f64::INFINITY, f64::min);
    ensure(weakest >= 0.9, || {
        format!("(c) largest plus cluster fraction {weakest}")
    })?;

    Ok(format!(
        "p_c proxy {:.3}; (a) {a:?} at {ca:.2}; (b) J={j:.4} both {bp:?}; (c) minus {c:?}, plus fraction >= {weakest:.3}",
        pc.estimate
    ))
}

fn threshold_arithmetic() -> Outcome {
    let params = CouplingParams::from_coupling(0.0, 7).unwrap();
    let r = thresholds(&params, 0.2).map_err(|e| e.to_string())?;
    let h = r.h_ising.ok_or("h_ising undefined at p_c = 0.2")?;
    ensure((h - 2f64.ln()).abs() <= 1e-12, || format!("h_ising = {h}"))?;
    let bound = pcwl_bound(0.5, 7).map_err(|e| e.to_string())?;
    ensure(bound.abs() <= 1e-12, || {
        format!("wired bound at 1/2 = {bound}")
    })?;
    let (lo, hi) = r.ising_window;
    ensure(
        (lo - 0.5).abs() <= 1e-12 && (hi - 0.5).abs() <= 1e-12,
        || format!("window at J=0: ({lo}, {hi})"),
    )?;
    Ok(format!(
        "h_ising {h:.12}, bound {bound}, window ({lo}, {hi})"
    ))
}

fn run_cli(args: &[&str], dir: &Path) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hyperperc"))
        .args(args)
        .current_dir(dir)
        .env_remove("HYPERPERC_BUDGET")
        .output()
        .map_err(|e| e.to_string())?;
    ensure(out.status.success(), || {
        format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr))
    })?;
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    const SWEEP: &str = "tiling = { vertex_degree = 7, face_degrees = [3, 3, 3, 3, 3, 3, 3] }\n\
        radii = [1, 2]\nmodel = \"ising\"\ngrid = [0.1, 0.3]\nboundary = \"plus\"\nchains = 2\n\
        sweeps = 40\nburn_in = 10\nthinning = 2\nseed = 11\n";
    let mut outputs = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let d = dir.path();
        std::fs::write(d.join("exp.toml"), SWEEP).map_err(|e| e.to_string())?;
        run_cli(
            &[
                "tiling-build",
                "--p",
                "3",
                "--q",
                "7",
                "--radius",
                "3",
                "--out",
                "map.txt",
            ],
            d,
        )?;
        let sample = [
            "sample",
            "--model",
            "ising",
            "--J",
            "0.08",
            "--boundary",
            "free",
            "--map",
            "map.txt",
        ];
        run_cli(
            &[
                &sample[..],
                &["--seed", "1", "--sweeps", "200", "--out", "cfg.jsonl"],
            ]
            .concat(),
            d,
        )?;
        let xor = [
            "sample", "--model", "xor", "--J", "0.3", "--map", "map.txt", "--seed", "4",
            "--sweeps", "50",
        ];
        let xor_out = run_cli(&xor, d)?;
        run_cli(
            &["sweep", "--config", "exp.toml", "--out", "results.jsonl"],
            d,
        )?;
        run_cli(
            &[
                "render",
                "--map",
                "map.txt",
                "--config",
                "cfg.jsonl",
                "--out",
                "fig.svg",
            ],
            d,
        )?;
        let thresholds = run_cli(&["thresholds", "--pc", "0.2", "--d", "7"], d)?;
        let mut files = Vec::new();
        for name in ["map.txt", "cfg.jsonl", "results.jsonl", "fig.svg"] {
            files.push(std::fs::read(d.join(name)).map_err(|e| e.to_string())?);
        }
        files.push(xor_out);
        files.push(thresholds);
        outputs.push(files);
    }
    let names = ["map", "sample", "sweep", "svg", "xor sample", "thresholds"];
    for (k, name) in names.iter().enumerate() {
        ensure(!outputs[0][k].is_empty(), || {
            format!("{name} output is empty")
        })?;
        ensure(outputs[0][k] == outputs[1][k], || {
            format!("{name} output differs between runs")
        })?;
    }
    let svg = String::from_utf8(outputs[0][3].clone()).map_err(|e| e.to_string())?;
    roxmltree::Document::parse(&svg).map_err(|e| format!("svg does not parse: {e}"))?;
    Ok(format!(
        "{} outputs byte-identical across two runs",
        names.len()
    ))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "coupling exactness",
            limit: Duration::from_secs(10),
            run: coupling,
        },
        Criterion {
            id: 2,
            name: "xor duality",
            limit: Duration::from_secs(30),
            run: xor_duality,
        },
        Criterion {
            id: 3,
            name: "structural invariants",
            limit: Duration::from_secs(120),
            run: structural,
        },
        Criterion {
            id: 4,
            name: "holley and domination",
            limit: Duration::from_secs(60),
            run: holley,
        },
        Criterion {
            id: 5,
            name: "sampler correctness",
            limit: Duration::from_secs(300),
            run: sampler_correctness,
        },
        Criterion {
            id: 6,
            name: "phase surrogates",
            limit: Duration::from_secs(900),
            run: phenomenology,
        },
        Criterion {
            id: 7,
            name: "threshold arithmetic",
            limit: Duration::from_secs(1),
            run: threshold_arithmetic,
        },
        Criterion {
            id: 8,
            name: "cli determinism",
            limit: Duration::from_secs(300),
            run: determinism,
        },
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for c in &criteria {
        if !filter.is_empty()
            && !filter
                .iter()
                .any(|f| c.name.contains(f.as_str()) || *f == c.id.to_string())
        {
            continue;
        }
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > c.limit => {
                Err(format!("{detail}; over the {:?} limit", c.limit))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!(
                "criterion {} {}: PASS ({detail}) in {:.1}s",
                c.id,
                c.name,
                elapsed.as_secs_f64()
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "criterion {} {}: FAIL ({why}) in {:.1}s",
                    c.id,
                    c.name,
                    elapsed.as_secs_f64()
                );
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
