//! Randomized invariant checks shared by the property tests and the acceptance runner.
//!
//! Every check takes the suite RNG and returns a description of the first violation.

#![allow(dead_code)]

use std::f64::consts::SQRT_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use srq::cli::{self, csv, parse_config};
use srq::dynamics::{evolve, linear_time_grid, steady_state_of, DensityMatrix};
use srq::linalg::{c64, eigh, kron, partial_trace, partial_transpose, pauli, Complex64, ComplexMatrix, LuFactors};
use srq::measures::{self, Axis};
use srq::model::{build_h_coh, build_jump_terms, build_liouvillian, qubit_reversal_permutation, ChainParams};
use srq::oracle::{self, AnalyticParams};
use srq::sweep::{find_peak, run_sweep, Grid, Measure, SweepParameter, SweepSpec};

/// Seed of every randomized suite; printed by the acceptance runner.
pub const SEED: u64 = 0x5eed_0c0d_e2a1_7e57;

pub type Check = fn(&mut ChaCha8Rng) -> Result<(), String>;

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

pub fn random_hermitian(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    random_matrix(rng, dim, dim).hermitian_part()
}

/// `G G† / tr(G G†)` for a Ginibre matrix `G`: full rank almost surely.
pub fn random_density(rng: &mut impl Rng, dim: usize) -> DensityMatrix {
    let g = random_matrix(rng, dim, dim);
    let m = g.matmul(&g.adjoint()).unwrap();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale_real(1.0 / tr)).unwrap()
}

pub fn random_pure(rng: &mut impl Rng, dim: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..dim)
        .map(|_| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// `exp(iH)` for a random Hermitian `H`.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> ComplexMatrix {
    let eig = eigh(&random_hermitian(rng, dim).scale_real(3.0)).unwrap();
    let v = &eig.eigenvectors;
    let phases = ComplexMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            Complex64::from_polar(1.0, eig.eigenvalues[r])
        } else {
            c64(0.0, 0.0)
        }
    });
    v.matmul(&phases).unwrap().matmul(&v.adjoint()).unwrap()
}

pub fn random_chain(rng: &mut impl Rng, n: usize) -> ChainParams {
    let draw = |rng: &mut dyn rand::RngCore, lo: f64, hi: f64| -> Vec<f64> {
        (0..n).map(|_| rng.random_range(lo..hi)).collect()
    };
    let rabi = draw(rng, 0.2, 2.0);
    let detuning = draw(rng, -1.0, 1.0);
    let gamma = draw(rng, 0.1, 2.0);
    ChainParams::new(
        n,
        rabi,
        detuning,
        rng.random_range(-2.0..2.0),
        gamma,
        rng.random_range(0.0..1.0),
    )
    .unwrap()
}

pub fn random_uniform_chain(rng: &mut impl Rng, n: usize) -> ChainParams {
    ChainParams::uniform(
        n,
        rng.random_range(0.2..2.0),
        rng.random_range(-1.0..1.0),
        rng.random_range(-2.0..2.0),
        rng.random_range(0.1..2.0),
        rng.random_range(0.0..1.0),
    )
    .unwrap()
}

fn permute(m: &ComplexMatrix, perm: &[usize]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(m.rows(), m.cols());
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            out[(perm[r], perm[c])] = m[(r, c)];
        }
    }
    out
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

// linear algebra

pub fn kron_is_associative(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..20 {
        let dims: Vec<usize> = (0..3).map(|_| rng.random_range(1..4)).collect();
        let (a, b, c) = (
            random_matrix(rng, dims[0], dims[1]),
            random_matrix(rng, dims[1], dims[2]),
            random_matrix(rng, dims[2], dims[0]),
        );
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        let d = left.max_abs_diff(&right);
        ensure(d < 1e-12, || {
            format!("kron associativity defect {d:e} for shapes {dims:?}")
        })?;
    }
    Ok(())
}

pub fn partial_traces_compose(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..20 {
        let rho = random_density(rng, 8);
        let m = rho.matrix();
        let dims = [2, 2, 2];
        for (first, second, direct) in [
            (vec![0, 1], vec![0], vec![0]),
            (vec![0, 2], vec![1], vec![2]),
            (vec![1, 2], vec![0], vec![1]),
        ] {
            let staged =
                partial_trace(&partial_trace(m, &dims, &first).map_err(err)?, &[2, 2], &second).map_err(err)?;
            let once = partial_trace(m, &dims, &direct).map_err(err)?;
            let d = staged.max_abs_diff(&once);
            ensure(d < 1e-12, || format!("staged partial trace differs by {d:e}"))?;
        }
    }
    Ok(())
}

pub fn partial_transpose_keeps_trace_and_hermiticity(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..20 {
        for (dims, dim) in [(vec![2, 2], 4), (vec![2, 3], 6), (vec![2, 2, 2], 8)] {
            let rho = random_density(rng, dim);
            for sub in 0..dims.len() {
                let pt = partial_transpose(rho.matrix(), &dims, sub).map_err(err)?;
                let dt = (pt.trace() - rho.matrix().trace()).norm();
                ensure(dt < 1e-14, || format!("partial transpose changed trace by {dt:e}"))?;
                ensure(pt.hermiticity_defect() < 1e-14, || {
                    "partial transpose broke Hermiticity".into()
                })?;
                let back = partial_transpose(&pt, &dims, sub).map_err(err)?;
                ensure(back.approx_eq(rho.matrix(), 0.0), || {
                    "partial transpose is not an involution".into()
                })?;
            }
        }
    }
    Ok(())
}

pub fn eigenvalues_sum_to_trace(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for dim in 1..=16 {
        let h = random_hermitian(rng, dim);
        let eig = eigh(&h).map_err(err)?;
        let d = (eig.eigenvalues.iter().sum::<f64>() - h.trace().re).abs();
        ensure(d < 1e-10, || format!("eigenvalue sum off trace by {d:e} at dim {dim}"))?;
        let r = eig.reconstruct().max_abs_diff(&h);
        ensure(r < 1e-10, || format!("reconstruction error {r:e} at dim {dim}"))?;
    }
    Ok(())
}

// model

pub fn liouvillian_is_trace_and_hermiticity_preserving(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for n in 1..=3 {
        for _ in 0..5 {
            let p = random_chain(rng, n);
            let l = build_liouvillian(&p);
            let rho = random_density(rng, p.dim());
            let d = l.apply(rho.matrix());
            ensure(d.trace().norm() < 1e-10, || {
                format!("tr L(rho) = {:e} for N={n}", d.trace().norm())
            })?;
            ensure(d.hermiticity_defect() < 1e-10, || {
                format!("L(rho) not Hermitian for N={n}")
            })?;
        }
    }
    Ok(())
}

pub fn noiseless_liouvillian_is_a_commutator(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for n in 1..=3 {
        let p = random_chain(rng, n).with_gamma_all(0.0).map_err(err)?;
        let l = build_liouvillian(&p);
        let h = build_h_coh(&p);
        let rho = random_matrix(rng, p.dim(), p.dim());
        let expected = h.commutator(&rho).map_err(err)?.scale(c64(0.0, -1.0));
        let d = l.apply(&rho).max_abs_diff(&expected);
        ensure(d < 1e-12, || format!("L differs from -i[H, .] by {d:e} for N={n}"))?;
    }
    Ok(())
}

pub fn liouvillian_is_linear(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for n in 1..=3 {
        let p = random_chain(rng, n);
        let l = build_liouvillian(&p);
        let (x, y) = (
            random_matrix(rng, p.dim(), p.dim()),
            random_matrix(rng, p.dim(), p.dim()),
        );
        let (a, b) = (
            c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
            c64(rng.random_range(-1.0..1.0), 0.3),
        );
        let lhs = l.apply(&(&x.scale(a) + &y.scale(b)));
        let rhs = &l.apply(&x).scale(a) + &l.apply(&y).scale(b);
        let d = lhs.max_abs_diff(&rhs);
        ensure(d < 1e-12, || format!("linearity defect {d:e} for N={n}"))?;
    }
    Ok(())
}

pub fn uniform_liouvillian_has_mirror_symmetry(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for n in 2..=4 {
        let p = random_uniform_chain(rng, n);
        let l = build_liouvillian(&p);
        let perm = qubit_reversal_permutation(n);
        let rho = random_matrix(rng, p.dim(), p.dim());
        let d = l
            .apply(&permute(&rho, &perm))
            .max_abs_diff(&permute(&l.apply(&rho), &perm));
        ensure(d < 1e-12, || format!("mirror symmetry defect {d:e} for N={n}"))?;
    }
    Ok(())
}

// dynamics

pub fn steady_state_is_a_fixed_point(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for n in 1..=4 {
        let p = random_chain(rng, n);
        let l = build_liouvillian(&p);
        let rho = steady_state_of(&p).map_err(err)?;
        let res = l.apply(rho.matrix()).frobenius_norm() / l.matrix().frobenius_norm();
        ensure(res < 1e-10, || format!("relative residual {res:e} for N={n}"))?;
    }
    Ok(())
}

pub fn evolution_preserves_trace_and_hermiticity(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for n in 1..=3 {
        let p = random_chain(rng, n);
        let rho0 = random_density(rng, p.dim());
        let traj = evolve(&rho0, &build_liouvillian(&p), &linear_time_grid(5.0, 26)).map_err(err)?;
        ensure(traj.max_trace_drift < 1e-8, || {
            format!("trace drift {:e} for N={n}", traj.max_trace_drift)
        })?;
        for rho in &traj.states {
            ensure((rho.matrix().trace().re - 1.0).abs() < 1e-8, || "trace left 1".into())?;
            ensure(rho.matrix().hermiticity_defect() < 1e-8, || {
                "state lost Hermiticity".into()
            })?;
        }
    }
    Ok(())
}

pub fn uniform_steady_state_has_mirror_symmetry(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for n in 2..=4 {
        let p = random_uniform_chain(rng, n);
        let rho = steady_state_of(&p).map_err(err)?;
        let d = permute(rho.matrix(), &qubit_reversal_permutation(n)).max_abs_diff(rho.matrix());
        ensure(d < 1e-8, || {
            format!("steady state not mirror symmetric ({d:e}) for N={n}")
        })?;
    }
    Ok(())
}

/// Steady state from a row-stacked Liouvillian, solved independently of the library path.
pub fn row_stacked_steady_state(p: &ChainParams) -> Result<ComplexMatrix, String> {
    let d = p.dim();
    let id = ComplexMatrix::identity(d);
    let h = build_h_coh(p);
    let mut l = (&kron(&h, &id) - &kron(&id, &h.transpose())).scale(c64(0.0, -1.0));
    for jump in build_jump_terms(p) {
        let op = &jump.operator;
        let ldl = op.adjoint().matmul(op).map_err(err)?;
        let term =
            &(&kron(op, &op.conj()) - &kron(&ldl, &id).scale_real(0.5)) - &kron(&id, &ldl.transpose()).scale_real(0.5);
        l = &l + &term.scale_real(2.0 * jump.rate);
    }
    for c in 0..d * d {
        l[(0, c)] = c64(0.0, 0.0);
    }
    for i in 0..d {
        l[(0, i * d + i)] = c64(1.0, 0.0);
    }
    let mut rhs = vec![c64(0.0, 0.0); d * d];
    rhs[0] = c64(1.0, 0.0);
    let x = LuFactors::factor(&l).map_err(err)?.solve(&rhs);
    ComplexMatrix::from_row_major(d, d, x).map_err(err)
}

pub fn steady_state_is_convention_independent(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for n in 1..=3 {
        let p = random_chain(rng, n);
        let a = steady_state_of(&p).map_err(err)?;
        let b = row_stacked_steady_state(&p)?;
        let d = a.matrix().max_abs_diff(&b);
        ensure(d < 1e-9, || {
            format!("row-stacked steady state differs by {d:e} for N={n}")
        })?;
    }
    Ok(())
}

// measures

pub fn eof_detects_exactly_the_npt_states(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (mut entangled, mut separable) = (0, 0);
    for _ in 0..300 {
        let k = rng.random_range(1..5);
        let weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..1.0)).collect();
        let total: f64 = weights.iter().sum();
        let mut m = ComplexMatrix::zeros(4, 4);
        for w in &weights {
            m = &m + &ComplexMatrix::projector(&random_pure(rng, 4)).scale_real(w / total);
        }
        let rho = DensityMatrix::new(m).map_err(err)?;
        let eof = measures::entanglement_of_formation(measures::concurrence(&rho).map_err(err)?).map_err(err)?;
        let pt = measures::min_pt_eigenvalue(&rho).map_err(err)?;
        ensure((eof > 1e-9) == (pt < -1e-9), || {
            format!("eof {eof:e} disagrees with min PT eigenvalue {pt:e}")
        })?;
        if eof > 1e-9 {
            entangled += 1;
        } else {
            separable += 1;
        }
    }
    ensure(entangled > 0 && separable > 0, || {
        "sample did not cover both classes".into()
    })
}

pub fn mutual_information_bounds_eof(_: &mut ChaCha8Rng) -> Result<(), String> {
    for s in [0.5, 1.5, SQRT_2] {
        for k in 0..50 {
            let r = 0.05 + (5.0 - 0.05) * k as f64 / 49.0;
            let rho = oracle::steady_state_2q(AnalyticParams::new(r, s).map_err(err)?);
            let pm = measures::pair_measures(&rho, 1, 2).map_err(err)?;
            ensure(pm.mutual_information >= pm.eof - 1e-9, || {
                format!("I < eof at r={r}, s={s}")
            })?;
        }
    }
    Ok(())
}

pub fn pair_signal_equals_single_qubit_coherence(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..5 {
        let p = ChainParams::resonant(2, rng.random_range(0.2..3.0), rng.random_range(0.1..4.0), 0.0).map_err(err)?;
        let rho = steady_state_of(&p).map_err(err)?;
        let sig = measures::signal(&rho, Axis::X).map_err(err)?;
        for q in 1..=2 {
            let c = measures::single_qubit_coherence(&rho, q).map_err(err)?;
            ensure((sig - c).abs() < 1e-9, || {
                format!("signal {sig} vs coherence {c} of qubit {q}")
            })?;
        }
    }
    Ok(())
}

pub fn concurrence_is_local_unitary_invariant(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..50 {
        let rho = if rng.random_bool(0.5) {
            random_density(rng, 4)
        } else {
            DensityMatrix::pure(&random_pure(rng, 4)).map_err(err)?
        };
        let u = kron(&random_unitary(rng, 2), &random_unitary(rng, 2));
        let rotated = u.matmul(rho.matrix()).map_err(err)?.matmul(&u.adjoint()).map_err(err)?;
        let c0 = measures::concurrence(&rho).map_err(err)?;
        let c1 = measures::concurrence(&DensityMatrix::new(rotated).map_err(err)?).map_err(err)?;
        ensure((c0 - c1).abs() < 1e-9, || {
            format!("concurrence {c0} became {c1} under a local unitary")
        })?;
    }
    Ok(())
}

// closed forms

pub fn closed_form_state_is_physical(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..200 {
        let (r, s) = (rng.random_range(0.0..=10.0), rng.random_range(1e-6..=5.0));
        let m = oracle::steady_state_2q(AnalyticParams::new(r, s).map_err(err)?).into_matrix();
        ensure(m.hermiticity_defect() < 1e-14, || {
            format!("not Hermitian at r={r}, s={s}")
        })?;
        ensure((m.trace().re - 1.0).abs() < 1e-13, || {
            format!("trace off at r={r}, s={s}")
        })?;
        let low = eigh(&m).map_err(err)?.eigenvalues[0];
        ensure(low > -1e-12, || format!("eigenvalue {low:e} at r={r}, s={s}"))?;
    }
    Ok(())
}

pub fn closed_form_threshold_is_half_inverse_coupling(_: &mut ChaCha8Rng) -> Result<(), String> {
    for s in [0.5, 1.0, 1.5, SQRT_2, 3.0] {
        let pt =
            |r: f64| measures::min_pt_eigenvalue(&oracle::steady_state_2q(AnalyticParams::new(r, s).unwrap())).unwrap();
        let (mut a, mut b) = (1e-3, 10.0);
        ensure(pt(a) >= 0.0 && pt(b) < 0.0, || format!("no sign change for s={s}"))?;
        while b - a > 1e-10 {
            let mid = 0.5 * (a + b);
            if pt(mid) < 0.0 {
                b = mid;
            } else {
                a = mid;
            }
        }
        let r = 0.5 * (a + b);
        ensure((r - 0.5 / s).abs() < 1e-6, || {
            format!("sign change at r={r}, expected {} for s={s}", 0.5 / s)
        })?;
    }
    Ok(())
}

pub fn closed_form_state_matches_signal_formula(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let sx =
        &(&kron(&pauli::sigma_x(), &pauli::identity()) + &kron(&pauli::identity(), &pauli::sigma_x())).scale_real(0.5);
    for _ in 0..100 {
        let p = AnalyticParams::new(rng.random_range(0.0..6.0), rng.random_range(0.01..5.0)).map_err(err)?;
        let rho = oracle::steady_state_2q(p);
        let v = rho.matrix().matmul(sx).map_err(err)?.trace().re;
        ensure((v - oracle::signal2(p)).abs() < 1e-12, || {
            format!("tr(rho S) = {v} vs signal2 {} at {p:?}", oracle::signal2(p))
        })?;
    }
    Ok(())
}

pub fn closed_form_signal_peaks_at_root_two(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for _ in 0..10 {
        let s = rng.random_range(0.1..5.0);
        let peak = find_peak(
            |r| oracle::signal2(AnalyticParams::new(r, s).unwrap()),
            (0.1, 6.0),
            1e-10,
        );
        ensure((peak.location - SQRT_2).abs() < 1e-6, || {
            format!("argmax {} for s={s}", peak.location)
        })?;
        ensure((peak.value - s / (2.0 + s * s)).abs() < 1e-12, || {
            format!("peak value {} for s={s}", peak.value)
        })?;
    }
    Ok(())
}

// sweeps

pub fn sweeps_are_deterministic_across_thread_counts(_: &mut ChaCha8Rng) -> Result<(), String> {
    let spec = SweepSpec {
        base: ChainParams::resonant(3, 1.5, 1.0, 0.1).map_err(err)?,
        parameter: SweepParameter::GammaAll,
        grid: Grid::linear(0.1, 3.0, 17),
        measures: vec![
            Measure::SignalX,
            Measure::Eof(1, 2),
            Measure::MutualInformation(1, 3),
            Measure::Coherence(2),
        ],
    };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_sweep(&spec))
    };
    let one = run(1).map_err(err)?;
    let many = run(4).map_err(err)?;
    let bits = |recs: &[srq::sweep::MeasureRecord]| -> Vec<u64> {
        recs.iter()
            .flat_map(|r| r.values.iter().map(|(_, v)| v.to_bits()))
            .collect()
    };
    ensure(one == many && bits(&one) == bits(&many), || {
        "records depend on the thread count".into()
    })
}

pub fn pair_sweep_matches_closed_form_signal(_: &mut ChaCha8Rng) -> Result<(), String> {
    for s in [0.5, 1.5, 3.0] {
        let spec = SweepSpec {
            base: ChainParams::resonant(2, s, 1.0, 0.0).map_err(err)?,
            parameter: SweepParameter::GammaAll,
            grid: Grid::linear(0.05, 5.0, 25),
            measures: vec![Measure::SignalX],
        };
        for rec in run_sweep(&spec).map_err(err)? {
            let got = rec.get(&Measure::SignalX).ok_or("failed point")?;
            let want = oracle::signal2(AnalyticParams::new(rec.parameter_value, s).map_err(err)?);
            ensure((got - want).abs() < 1e-9, || {
                format!("signal {got} vs {want} at Γ={}", rec.parameter_value)
            })?;
        }
    }
    Ok(())
}

/// `(n̄, I₁₂, eof₁₂)` of the N=4, s=1.5, Γ/Ω=1 chain on 40 points of `[0, 2]`.
pub fn temperature_sweep() -> Result<Vec<(f64, f64, f64)>, String> {
    let spec = SweepSpec {
        base: ChainParams::resonant(4, 1.5, 1.0, 0.0).map_err(err)?,
        parameter: SweepParameter::Nbar,
        grid: Grid::linear(0.0, 2.0, 40),
        measures: vec![Measure::MutualInformation(1, 2), Measure::Eof(1, 2)],
    };
    run_sweep(&spec)
        .map_err(err)?
        .into_iter()
        .map(|r| match r.failure {
            Some(f) => Err(f),
            None => Ok((r.parameter_value, r.values[0].1, r.values[1].1)),
        })
        .collect()
}

pub fn mutual_information_falls_with_temperature(_: &mut ChaCha8Rng) -> Result<(), String> {
    let rows = temperature_sweep()?;
    for w in rows.windows(2) {
        ensure(w[1].1 <= w[0].1 + 1e-9, || {
            format!("I12 rises from n̄={} to n̄={}", w[0].0, w[1].0)
        })?;
    }
    Ok(())
}

pub fn pair_entanglement_tracks_the_threshold(_: &mut ChaCha8Rng) -> Result<(), String> {
    for s in [0.5, 1.5, 3.0] {
        let threshold = oracle::gamma_threshold(1.0, s).map_err(err)?;
        let (lo, hi, points) = (0.02, 2.5, 60);
        let step = (hi - lo) / (points - 1) as f64;
        let spec = SweepSpec {
            base: ChainParams::resonant(2, s, 1.0, 0.0).map_err(err)?,
            parameter: SweepParameter::GammaAll,
            grid: Grid::linear(lo, hi, points),
            measures: vec![Measure::Eof(1, 2)],
        };
        for rec in run_sweep(&spec).map_err(err)? {
            let g = rec.parameter_value;
            if (g - threshold).abs() <= 2.0 * step {
                continue;
            }
            let eof = rec.get(&Measure::Eof(1, 2)).ok_or("failed point")?;
            ensure((eof > 1e-9) == (g > threshold), || {
                format!("eof {eof:e} at Γ={g}, threshold {threshold}")
            })?;
        }
    }
    Ok(())
}

// command line

const CLI_SWEEP: &str = r#"{
    "system": {"n_qubits": 2, "rabi": 2.0, "j": 3.0, "gamma": 1.0, "nbar": 0.05},
    "run": {"mode": "sweep", "parameter": "gamma_all", "grid": {"min": 0.1, "max": 6, "points": 12},
            "measures": ["signal_x", "eof:1:2", "min_pt_eig:1:2"]}
}"#;

pub fn cli_output_is_reproducible_and_round_trips(_: &mut ChaCha8Rng) -> Result<(), String> {
    let cfg = parse_config(CLI_SWEEP).map_err(err)?;
    let first = cli::run_job(&cfg, true).map_err(err)?.table;
    let second = cli::run_job(&cfg, true).map_err(err)?.table;
    let text = first.render();
    ensure(text == second.render(), || {
        "identical configs gave different CSV".into()
    })?;
    let (_, columns, rows) = csv::parse(&text)?;
    ensure(columns == first.columns, || "header did not round-trip".into())?;
    for (parsed, cells) in rows.iter().zip(&first.rows) {
        for (p, c) in parsed.iter().zip(cells) {
            let v = match *c {
                csv::Cell::Float(v) => v,
                csv::Cell::Int(i) => i as f64,
            };
            ensure(p.to_bits() == v.to_bits(), || format!("{v:e} re-parsed as {p:e}"))?;
        }
    }
    Ok(())
}

pub fn cli_exit_codes_are_stable(_: &mut ChaCha8Rng) -> Result<(), String> {
    let dir = tempfile::tempdir().map_err(err)?;
    let write = |name: &str, text: &str| {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    };
    let good = write("good.json", CLI_SWEEP);
    let bad = write(
        "bad.json",
        &CLI_SWEEP.replace("\"gamma\": 1.0", "\"gamma\": [1.0, 1.0, 1.0]"),
    );
    let frozen = write(
        "frozen.json",
        r#"{"system": {"n_qubits": 2, "j": 1.0, "gamma": 0.0}, "run": {"mode": "steady"}}"#,
    );
    let code = |args: &[&str]| cli::run_from_args(std::iter::once("srq").chain(args.iter().copied()));
    let s = |p: &std::path::Path| p.to_str().unwrap().to_string();
    let out = s(&dir.path().join("out.csv"));
    let (good, bad, frozen) = (s(&good), s(&bad), s(&frozen));
    let cases = [
        (vec!["sweep", "--config", &good, "--out", &out, "--reproducible"], 0),
        (vec!["sweep", "--config", &bad, "--out", &out], 2),
        (vec!["steady", "--config", &good, "--out", &out], 2),
        (
            vec!["sweep", "--config", &good, "--set", "system.nbar=-1", "--out", &out],
            2,
        ),
        (vec!["steady", "--config", &frozen, "--out", &out], 3),
        (vec!["sweep", "--config", "/nonexistent/job.json"], 4),
        (vec!["sweep", "--config", &good, "--out", "/nonexistent/dir/out.csv"], 4),
        (vec!["frobnicate"], 2),
    ];
    for (args, want) in cases {
        let got = code(&args);
        ensure(got == want, || {
            format!("`srq {}` exited {got}, expected {want}", args.join(" "))
        })?;
    }
    Ok(())
}

/// Every invariant check, in module order.
pub const PROPERTIES: &[(&str, Check)] = &[
    ("kron_is_associative", kron_is_associative),
    ("partial_traces_compose", partial_traces_compose),
    (
        "partial_transpose_keeps_trace_and_hermiticity",
        partial_transpose_keeps_trace_and_hermiticity,
    ),
    ("eigenvalues_sum_to_trace", eigenvalues_sum_to_trace),
    (
        "liouvillian_is_trace_and_hermiticity_preserving",
        liouvillian_is_trace_and_hermiticity_preserving,
    ),
    (
        "noiseless_liouvillian_is_a_commutator",
        noiseless_liouvillian_is_a_commutator,
    ),
    ("liouvillian_is_linear", liouvillian_is_linear),
    (
        "uniform_liouvillian_has_mirror_symmetry",
        uniform_liouvillian_has_mirror_symmetry,
    ),
    ("steady_state_is_a_fixed_point", steady_state_is_a_fixed_point),
    (
        "evolution_preserves_trace_and_hermiticity",
        evolution_preserves_trace_and_hermiticity,
    ),
    (
        "uniform_steady_state_has_mirror_symmetry",
        uniform_steady_state_has_mirror_symmetry,
    ),
    (
        "steady_state_is_convention_independent",
        steady_state_is_convention_independent,
    ),
    ("eof_detects_exactly_the_npt_states", eof_detects_exactly_the_npt_states),
    ("mutual_information_bounds_eof", mutual_information_bounds_eof),
    (
        "pair_signal_equals_single_qubit_coherence",
        pair_signal_equals_single_qubit_coherence,
    ),
    (
        "concurrence_is_local_unitary_invariant",
        concurrence_is_local_unitary_invariant,
    ),
    ("closed_form_state_is_physical", closed_form_state_is_physical),
    (
        "closed_form_threshold_is_half_inverse_coupling",
        closed_form_threshold_is_half_inverse_coupling,
    ),
    (
        "closed_form_state_matches_signal_formula",
        closed_form_state_matches_signal_formula,
    ),
    (
        "closed_form_signal_peaks_at_root_two",
        closed_form_signal_peaks_at_root_two,
    ),
    (
        "sweeps_are_deterministic_across_thread_counts",
        sweeps_are_deterministic_across_thread_counts,
    ),
    (
        "pair_sweep_matches_closed_form_signal",
        pair_sweep_matches_closed_form_signal,
    ),
    (
        "mutual_information_falls_with_temperature",
        mutual_information_falls_with_temperature,
    ),
    (
        "pair_entanglement_tracks_the_threshold",
        pair_entanglement_tracks_the_threshold,
    ),
    (
        "cli_output_is_reproducible_and_round_trips",
        cli_output_is_reproducible_and_round_trips,
    ),
    ("cli_exit_codes_are_stable", cli_exit_codes_are_stable),
];

/// Runs one named check with a fresh suite RNG.
pub fn run_property(name: &str) -> Result<(), String> {
    let (_, check) = PROPERTIES.iter().find(|(n, _)| *n == name).expect("known property");
    check(&mut rng())
}
