//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use statrs::function::erf::erfc;
use weakmeas::figure::{run_figure, FigureId, FigureTable};
use weakmeas_core::fockspace::{
    amplitude_from_quadratures, coherent_state, displaced_thermal_state, make_operator, position_kernel,
    DensityOperator, Observable, OperatorKind, QuadratureGrid,
};
use weakmeas_core::povm::{gaussian_kernel, sigma_from_efficiency, validate, DetectorKernel};
use weakmeas_core::quasiprob::{
    conditional_expectation, effective_distribution, negativity_scan, s_distribution, t_distribution, BasisPair,
};
use weakmeas_core::vonneumann::{
    conditional_pointer_shift, evolve_exact, joint_distribution, GaussianComponent, PointerState,
};
use weakmeas_core::weakvalues::{
    h_closed_profile, n_closed_profile, negativity_probability, p2_closed_profile, weak_value, Method, WeakValueProfile,
};
use weakmeas_core::Complex64;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn probability(prof: &WeakValueProfile, m: Method) -> f64 {
    negativity_probability(prof, m).unwrap().probability
}

fn random_state(rng: &mut StdRng, dim: usize, embed: usize) -> DensityOperator {
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    });
    let small = &g * g.adjoint();
    let mut m = DMatrix::zeros(embed, embed);
    m.view_mut((0, 0), (dim, dim)).copy_from(&small);
    DensityOperator::from_unnormalized(m).unwrap()
}

fn kinetic_negativity() -> Outcome {
    let start = Instant::now();
    let want = erfc(1.0);
    let (mut cf_err, mut qd_err) = (0.0f64, 0.0f64);
    for ar in [0.0, 1.0, 5.0, 50.0] {
        let prof = p2_closed_profile(ar, 0.0, 0.0, 0.0).unwrap();
        cf_err = cf_err.max((probability(&prof, Method::ClosedForm) - want).abs());
        qd_err = qd_err.max((probability(&prof, Method::Quadrature) - want).abs());
    }
    let t = start.elapsed().as_secs_f64();
    outcome(
        cf_err < 1e-9 && qd_err < 1e-6 && t < 1.0,
        format!("erfc(1)={want:.5}, closed err {cf_err:.1e}, quadrature err {qd_err:.1e}, {t:.3}s"),
    )
}

fn energy_negativity() -> Outcome {
    let want = 0.5 * erfc(1.0);
    let prof = h_closed_profile(1.0, 0.0, 0.0, 0.0).unwrap();
    let cf = (probability(&prof, Method::ClosedForm) - want).abs();
    let qd = (probability(&prof, Method::Quadrature) - want).abs();
    outcome(
        cf < 1e-9 && qd < 1e-6,
        format!("erfc(1)/2={want:.5}, closed err {cf:.1e}, quadrature err {qd:.1e}"),
    )
}

fn number_negativity() -> Outcome {
    let mut err = 0.0f64;
    for ar in [0.02, 0.1, 0.3, 1.0, 2.0, 4.0] {
        let prof = n_closed_profile(ar, 0.0, 0.0, 0.0).unwrap();
        let want = 0.5 * erfc(ar / 2.0);
        err = err.max((probability(&prof, Method::ClosedForm) - want).abs());
        err = err.max((probability(&prof, Method::Quadrature) - want).abs());
    }
    let near = probability(&n_closed_profile(0.02, 0.0, 0.0, 0.0).unwrap(), Method::ClosedForm);
    let zero = n_closed_profile(0.0, 0.0, 0.0, 0.0).unwrap();
    let (z_cf, z_qd) = (
        probability(&zero, Method::ClosedForm),
        probability(&zero, Method::Quadrature),
    );
    outcome(
        err < 1e-9 && near >= 0.49 && z_cf == 0.0 && z_qd == 0.0,
        format!("max err vs erfc(a/2)/2 {err:.1e}, P(0.02)={near:.4}, P(0)={z_cf}"),
    )
}

fn thermal_s(q: f64, p: f64, nth: f64, s_eta2: f64) -> Complex64 {
    let s2 = nth + 0.5;
    let d = 1.0 + 4.0 * s2 * s2 + 4.0 * s2 * s_eta2;
    let arg = Complex64::new(-(2.0 * s2 * (p * p + q * q) + 2.0 * p * p * s_eta2), 2.0 * p * q) / d;
    arg.exp() / (PI * d.sqrt())
}

fn thermal_oracle() -> Outcome {
    let g = QuadratureGrid::uniform(-3.0, 3.0, 21).unwrap();
    let basis = BasisPair::position_momentum(g.clone(), g.clone());
    let mut worst = 0.0f64;
    for nth in [0.0, 0.5, 2.0] {
        let rho = displaced_thermal_state(Complex64::new(0.0, 0.0), nth, 60).unwrap();
        let s = s_distribution(&rho, &basis).unwrap();
        for s_eta2 in [0.0f64, 0.5] {
            let d = if s_eta2 == 0.0 {
                s.clone()
            } else {
                effective_distribution(&s, &gaussian_kernel(s_eta2.sqrt()).unwrap()).unwrap()
            };
            for (i, &q) in g.points().iter().enumerate() {
                for (j, &p) in g.points().iter().enumerate() {
                    worst = worst.max((d.value(i, j) - thermal_s(q, p, nth, s_eta2)).norm());
                }
            }
        }
    }
    outcome(
        worst < 1e-6,
        format!("max |S_num - S_closed| = {worst:.1e} over 21x21, n_th in {{0,0.5,2}}, s_eta^2 in {{0,0.5}}"),
    )
}

fn marginality() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let g = QuadratureGrid::symmetric(9.0, 200).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let rho = random_state(&mut rng, 20, 20);
        for basis in [
            BasisPair::position_fock(g.clone()),
            BasisPair::position_momentum(g.clone(), g.clone()),
        ] {
            let s = s_distribution(&rho, &basis).unwrap();
            let t = t_distribution(&s);
            let xi_density = basis.xi_density(&rho);
            for d in [&s, &t] {
                for (m, &q) in d.phi_marginal().iter().zip(d.phi_points()) {
                    worst = worst.max((m - position_kernel(&rho, q, q)).norm());
                }
                for (m, want) in d.xi_marginal().iter().zip(&xi_density) {
                    worst = worst.max((m - want).norm());
                }
            }
        }
    }
    outcome(
        worst < 1e-6,
        format!("max marginal defect {worst:.1e} over 10 states x 2 bases x (S, T)"),
    )
}

fn conditional_equivalence() -> Outcome {
    let mut rng = StdRng::seed_from_u64(11);
    let g = QuadratureGrid::symmetric(9.0, 200).unwrap();
    let fock = BasisPair::position_fock(g.clone());
    let mom = BasisPair::position_momentum(g.clone(), g);
    let named = [
        OperatorKind::Hamiltonian,
        OperatorKind::MomentumSquared,
        OperatorKind::Number,
        OperatorKind::Position,
        OperatorKind::Momentum,
    ];
    let mut worst = 0.0f64;
    for k in 0..20 {
        let rho = random_state(&mut rng, 10, 12);
        let h = DMatrix::from_fn(12, 12, |_, _| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let nu = Observable::general((&h + h.adjoint()) * Complex64::new(0.5, 0.0)).unwrap();
        let phi = rng.gen_range(-2.0..2.0);
        let kernel = gaussian_kernel(rng.gen_range(0.0..0.8)).unwrap();
        let trace = weak_value(&nu, &rho, &kernel, phi).unwrap();
        worst = worst.max((conditional_expectation(&nu, &rho, &fock, &kernel, phi).unwrap() - trace).norm());
        let nu = make_operator(named[k % named.len()], 12).unwrap();
        let trace = weak_value(&nu, &rho, &kernel, phi).unwrap();
        worst = worst.max((conditional_expectation(&nu, &rho, &mom, &kernel, phi).unwrap() - trace).norm());
    }
    outcome(
        worst < 1e-8,
        format!("max |grid - trace| = {worst:.1e} over 20 tuples in (q,n) and (q,p)"),
    )
}

/// `(shift/eps - Re H_w, same at eps/2)` for one pointer and postselection.
fn pointer_deviation(ptr: &PointerState, q: f64, eps: f64) -> (f64, f64, f64) {
    let rho = coherent_state(amplitude_from_quadratures(1.0, 0.0), 40).unwrap();
    let h = make_operator(OperatorKind::Hamiltonian, 40).unwrap();
    let pg = QuadratureGrid::new(vec![q], vec![1.0]).unwrap();
    let qg = ptr.readout_grid(400).unwrap();
    let d = DetectorKernel::delta();
    let table = |e: f64| joint_distribution(&evolve_exact(&rho, ptr, &h, e).unwrap(), &d, &d, &pg, &qg);
    let base = table(0.0);
    let want = weak_value(&h, &rho, &d, q).unwrap().re;
    let dev = |e: f64| conditional_pointer_shift(&table(e), q, &base).unwrap() - want;
    (want, dev(eps), dev(0.5 * eps))
}

fn first_order_law() -> Outcome {
    let single = PointerState::gaussian(0.0, 1.0).unwrap();
    let mixture = PointerState::mixture(vec![
        GaussianComponent::new(0.5, -1.0, 0.8),
        GaussianComponent::new(0.5, 1.5, 1.2),
    ])
    .unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, ptr) in [("gaussian", &single), ("mixture", &mixture)] {
        for q in [-1.0, 0.0, 2.0] {
            let (want, d1, d2) = pointer_deviation(ptr, q, 1e-3);
            let close = d1.abs() < 0.02 * want.abs().max(1.0);
            let ratio = d1 / d2;
            let halves = (1.8..=2.2).contains(&ratio);
            pass &= close && halves;
            parts.push(format!("{name} q={q}: dev {d1:.1e} ratio {ratio:.2}"));
        }
    }
    outcome(pass, parts.join("; "))
}

fn undisturbed_marginal() -> Outcome {
    let rho = coherent_state(amplitude_from_quadratures(1.0, 0.0), 30).unwrap();
    let h = make_operator(OperatorKind::Hamiltonian, 30).unwrap();
    let ptr = PointerState::default_gaussian();
    let pg = QuadratureGrid::symmetric(6.0, 41).unwrap();
    let qg = ptr.readout_grid(400).unwrap();
    let d = DetectorKernel::delta();
    let dev = |eps: f64| {
        let t = joint_distribution(&evolve_exact(&rho, &ptr, &h, eps).unwrap(), &d, &d, &pg, &qg);
        t.phi_marginal()
            .iter()
            .zip(pg.points())
            .map(|(m, &phi)| (m - rho.position_density(phi)).abs())
            .fold(0.0, f64::max)
    };
    let (a, b) = (dev(1e-2), dev(5e-3));
    let r = a / b;
    outcome(
        (3.5..=4.5).contains(&r),
        format!("max defect {a:.2e} -> {b:.2e}, ratio {r:.3}"),
    )
}

fn povm_validity() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for eta in [0.5, 0.7, 1.0] {
        let s = sigma_from_efficiency(eta).unwrap();
        let k = gaussian_kernel(s).unwrap();
        let half = 20.0 * s.max(0.01);
        let r = validate(&k, &QuadratureGrid::gauss_legendre(-half, half, 800).unwrap());
        pass &= r.passes(1e-8);
        parts.push(format!(
            "eta={eta}: norm {:.1e} bias {:.1e} ({} samples)",
            r.max_normalization_defect, r.max_bias, r.samples
        ));
    }
    outcome(pass, parts.join("; "))
}

fn classicality_gate() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let g = QuadratureGrid::symmetric(6.0, 61).unwrap();
    let qs: Vec<f64> = (0..=100).map(|i| -5.0 + 0.1 * i as f64).collect();
    let h = make_operator(OperatorKind::Hamiltonian, 20).unwrap();
    let d = DetectorKernel::delta();
    let (mut min_t, mut min_h) = (f64::INFINITY, f64::INFINITY);
    for _ in 0..10 {
        let w: Vec<f64> = (0..20).map(|_| rng.gen_range(0.0..1.0)).collect();
        let rho = DensityOperator::diagonal(&w).unwrap();
        let t = t_distribution(&s_distribution(&rho, &BasisPair::position_fock(g.clone())).unwrap());
        min_t = min_t.min(negativity_scan(&t).min_value);
        for &q in &qs {
            min_h = min_h.min(weak_value(&h, &rho, &d, q).unwrap().re);
        }
    }
    let coh = coherent_state(amplitude_from_quadratures(1.0, 0.0), 20).unwrap();
    let t = t_distribution(&s_distribution(&coh, &BasisPair::position_fock(g)).unwrap());
    let coh_t = negativity_scan(&t).min_value;
    let coh_h = qs[10..=90]
        .iter()
        .map(|&q| weak_value(&h, &coh, &d, q).unwrap().re)
        .fold(f64::INFINITY, f64::min);
    outcome(
        min_t >= -1e-10 && min_h >= 0.5 - 1e-6 && coh_t < 0.0 && coh_h < 0.0,
        format!(
            "diagonal: min T {min_t:.1e}, min Re H_w {min_h:.6}; coherent: min T {coh_t:.2e}, min Re H_w {coh_h:.3}"
        ),
    )
}

fn row_cells<'a>(t: &'a FigureTable, keep: impl Fn(&[f64; 5]) -> bool + 'a) -> Vec<[f64; 5]> {
    t.rows.iter().filter(|r| keep(r)).copied().collect()
}

/// First value of `axis` with positive probability, if it is not the first.
fn threshold(cells: &[[f64; 5]], axis: usize) -> Option<f64> {
    let first = cells.iter().position(|r| r[4] > 0.0)?;
    (first > 0 && cells[..first].iter().all(|r| r[4] == 0.0) && cells[0][axis] < cells[first][axis])
        .then(|| cells[first][axis])
}

fn figure_regeneration() -> Outcome {
    let start = Instant::now();
    let tables: Vec<FigureTable> = FigureId::ALL
        .iter()
        .map(|&f| run_figure(f, &f.default_config()).unwrap())
        .collect();
    let elapsed = start.elapsed().as_secs_f64();
    let get = |f: FigureId| tables.iter().find(|t| t.figure == f).unwrap();
    let in_range = tables
        .iter()
        .all(|t| t.rows.iter().all(|r| (0.0..=1.0).contains(&r[4])));

    let h_noisy = row_cells(get(FigureId::HNoisy), |r| r[1] == 0.0);
    let alpha_min = threshold(&h_noisy, 0);
    let n_row = row_cells(get(FigureId::NEtaNth), |r| (r[3] - 0.3).abs() < 1e-12);
    let eta_min = threshold(&n_row, 2);
    let n_row_max = n_row.iter().map(|r| r[4]).fold(0.0, f64::max);
    let n_reach = get(FigureId::NEtaNth)
        .rows
        .iter()
        .filter(|r| r[4] > 0.0)
        .map(|r| r[3])
        .fold(f64::NAN, f64::max);

    let h_ideal = get(FigureId::HIdeal);
    let peak = h_ideal
        .rows
        .iter()
        .copied()
        .fold([0.0; 5], |a, r| if r[4] > a[4] { r } else { a });
    let peak_ok = peak[0] == 1.0 && peak[1] == 0.0;
    let p2 = get(FigureId::P2EtaNth);
    let p2_monotone = p2
        .rows
        .windows(2)
        .all(|w| w[0][2] != w[1][2] || w[1][4] <= w[0][4] + 1e-15)
        && p2.rows.iter().all(|r| {
            p2.rows
                .iter()
                .filter(|s| s[3] == r[3] && s[2] > r[2])
                .all(|s| s[4] >= r[4] - 1e-15)
        });

    let pass = elapsed < 60.0 && in_range && alpha_min.is_some() && eta_min.is_some() && peak_ok && p2_monotone;
    outcome(
        pass,
        format!(
            "{elapsed:.2}s; h_noisy alpha_r threshold {alpha_min:?}; n_eta_nth eta threshold at n_th=0.3 {eta_min:?} \
             (max P there {n_row_max:.1e}, negativity only up to n_th={n_reach}); h_ideal peak at ({}, {}); p2 monotone {p2_monotone}",
            peak[0], peak[1]
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("kinetic-energy negativity", kinetic_negativity),
        ("energy negativity", energy_negativity),
        ("photon-number negativity", number_negativity),
        ("thermal S oracle", thermal_oracle),
        ("marginality suite", marginality),
        ("conditional-expectation equivalence", conditional_equivalence),
        ("first-order pointer law", first_order_law),
        ("undisturbed postselection marginal", undisturbed_marginal),
        ("POVM validity", povm_validity),
        ("classicality gate", classicality_gate),
        ("figure regeneration", figure_regeneration),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
