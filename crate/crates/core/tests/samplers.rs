use std::time::Instant;

use hyperperc::clusters::{BondBoundary, BondConfig, SiteBoundary};
use hyperperc::oracle::{enumerate_ising, sampler_gof, tiny_graph, GofPlan, SamplerCase};
use hyperperc::planar_map::{build_ball, BallSpec, TilingSpec};
use hyperperc::samplers::{
    coupling_to_edge_weight, edwards_sokal_color, fk_heatbath_sweep, glauber_sweep,
    heat_bath_plus_probability, random_start, sample_bernoulli, swendsen_wang_sweep, Graph,
    RngSpec,
};

fn plan(samples: u64, thinning: usize, stream: u64) -> GofPlan {
    GofPlan {
        samples,
        burn_in: 1000,
        thinning,
        rng: RngSpec::new(20_240_611, stream),
    }
}

fn all_cases() -> Vec<(SamplerCase, usize)> {
    let j = 0.35;
    let p = coupling_to_edge_weight(j);
    vec![
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
    ]
}

#[test]
fn every_sampler_fits_its_exact_law() {
    for name in ["triangle", "grid2x2"] {
        let g = tiny_graph(name).unwrap();
        for (i, (case, thin)) in all_cases().into_iter().enumerate() {
            let start = Instant::now();
            let r = sampler_gof(&g, case, &plan(100_000, thin, i as u64)).unwrap();
            eprintln!(
                "{name} {case:?}: p = {:.4} ({} bins) in {:?}",
                r.p_value,
                r.bins,
                start.elapsed()
            );
            assert!(r.p_value > 0.01, "{name} {case:?}: {r:?}");
        }
    }
}

#[test]
fn fk_with_unit_q_refreshes_independently() {
    let g = tiny_graph("grid2x2").unwrap();
    for boundary in [BondBoundary::FreeRC, BondBoundary::WiredRC] {
        let case = SamplerCase::FkHeatBath {
            p: 0.4,
            q: 1.0,
            boundary,
        };
        let r = sampler_gof(&g, case, &plan(200_000, 1, 99)).unwrap();
        assert!(r.p_value > 0.01, "{boundary:?}: {r:?}");
    }
}

#[test]
fn edge_agreement_on_k2() {
    let g = tiny_graph("k2").unwrap();
    let j = 0.6f64;
    let want = j.exp() / (j.exp() + (-j).exp());
    let n = 100_000;
    let mut rng = RngSpec::new(5, 0).rng();
    let mut cfg = random_start(&g, SiteBoundary::Free, &mut rng);
    let mut agree = 0;
    for _ in 0..n {
        glauber_sweep(&g, &mut cfg, j, &mut rng).unwrap();
        agree += usize::from(cfg.states[0] == cfg.states[1]);
    }
    // Consecutive Glauber states are correlated; allow for that with a
    // wider band than the i.i.d. 3 sigma.
    let sigma = (want * (1.0 - want) / n as f64).sqrt();
    assert!((agree as f64 / n as f64 - want).abs() < 6.0 * sigma);

    // Fk bonds then colouring agree with probability e^J / 2cosh J exactly.
    let p = coupling_to_edge_weight(j);
    let mut bonds = BondConfig {
        map_ref: g.map_ref(),
        states: vec![0],
        boundary_condition: BondBoundary::FreeRC,
    };
    let mut agree = 0;
    for _ in 0..n {
        fk_heatbath_sweep(&g, &mut bonds, p, 2.0, &mut rng).unwrap();
        let s = edwards_sokal_color(&g, &bonds, &mut rng).unwrap();
        agree += usize::from(s.states[0] == s.states[1]);
    }
    assert!((agree as f64 / n as f64 - want).abs() < 4.0 * sigma);
}

// Heat-bath kernels written out as matrices from the single-site rule fix
// the exact measure.
#[test]
fn heat_bath_kernel_fixes_the_measure() {
    for name in ["k2", "triangle"] {
        let g = tiny_graph(name).unwrap();
        let n = g.num_vertices();
        let j = 0.45;
        let mu = enumerate_ising(&g, j, SiteBoundary::Free).unwrap().dense();
        let mut dist = mu.clone();
        for v in 0..n {
            let mut next = vec![0.0; dist.len()];
            for (s, &w) in dist.iter().enumerate() {
                let field: i64 = g
                    .neighbors(v)
                    .iter()
                    .map(|&u| if s >> u & 1 == 1 { 1 } else { -1 })
                    .sum();
                let up = heat_bath_plus_probability(field, j);
                next[s | 1 << v] += w * up;
                next[s & !(1 << v)] += w * (1.0 - up);
            }
            dist = next;
        }
        for (a, b) in dist.iter().zip(&mu) {
            assert!((a - b).abs() < 1e-14, "{name}");
        }
    }
}

#[test]
fn free_magnetization_is_symmetric() {
    let g = tiny_graph("grid2x2").unwrap();
    let mut rng = RngSpec::new(11, 0).rng();
    let mut cfg = random_start(&g, SiteBoundary::Free, &mut rng);
    let n = 20_000;
    let mut m = Vec::with_capacity(n);
    for _ in 0..n {
        swendsen_wang_sweep(&g, &mut cfg, 0.5, &mut rng).unwrap();
        m.push(cfg.magnetization());
    }
    let mean = m.iter().sum::<f64>() / n as f64;
    let var = m.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
    assert!(mean.abs() < 4.0 * (var / n as f64).sqrt());
}

#[test]
fn bernoulli_means_stay_in_binomial_band() {
    let map = build_ball(&BallSpec::new(TilingSpec::regular(3, 7).unwrap(), 2)).unwrap();
    let g = Graph::new(&map);
    let mut rng = RngSpec::new(3, 1).rng();
    let n = 10_000;
    let mut ones = vec![0u32; g.num_vertices()];
    for _ in 0..n {
        for (o, &s) in ones
            .iter_mut()
            .zip(&sample_bernoulli(&g, 0.5, &mut rng).unwrap().states)
        {
            *o += u32::from(s);
        }
    }
    let sigma = (0.25 / n as f64).sqrt();
    for o in ones {
        assert!((f64::from(o) / n as f64 - 0.5).abs() < 4.0 * sigma);
    }
}

#[test]
fn glauber_and_swendsen_wang_agree_under_plus_boundary() {
    let map = build_ball(&BallSpec::new(TilingSpec::regular(3, 7).unwrap(), 2)).unwrap();
    let g = Graph::new(&map);
    let j = 0.15;
    let run = |sw: bool, stream: u64| {
        let mut rng = RngSpec::new(8, stream).rng();
        let mut cfg = random_start(&g, SiteBoundary::AllPlus, &mut rng);
        let sweep = |c: &mut _, r: &mut _| {
            if sw {
                swendsen_wang_sweep(&g, c, j, r).unwrap()
            } else {
                glauber_sweep(&g, c, j, r).unwrap()
            }
        };
        for _ in 0..1000 {
            sweep(&mut cfg, &mut rng);
        }
        // Batch means over 50 batches of 200 sweeps.
        let batches: Vec<f64> = (0..50)
            .map(|_| {
                (0..200)
                    .map(|_| {
                        sweep(&mut cfg, &mut rng);
                        cfg.magnetization()
                    })
                    .sum::<f64>()
                    / 200.0
            })
            .collect();
        let mean = batches.iter().sum::<f64>() / 50.0;
        let var = batches.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 49.0;
        (mean, var / 50.0)
    };
    let (a, va) = run(false, 0);
    let (b, vb) = run(true, 1);
    assert!(
        (a - b).abs() < 3.0 * (va + vb).sqrt(),
        "glauber {a} vs sw {b}"
    );
}
