//! Task implementations: each maps resolved settings to a report.

use nls_defect::boundary::{
    build_case_solution, check_functional_equations, check_jump_relation,
    render_differential_form, verify_on_free_solutions, BoundaryCase,
};
use nls_defect::breaking::{
    build_tilde_s, check_lambda_identities, check_reconstruction, expand_and_classify, summarize,
    tilde_vevs, GenKind,
};
use nls_defect::defect_rep::{
    build_classified, build_nls_defect, ClassifiedParams, DefectRep, NLSDefectParams,
};
use nls_defect::presets;
use nls_defect::report::{CheckRecord, Report};
use nls_defect::rt_engine::{Delta, Engine, Tensor, Weight};
use nls_defect::sampling::Sampler;
use nls_defect::smatrix::DoubledSMatrix;
use nls_defect::Error;
use num_complex::Complex64;

use crate::Settings;

type Result<T> = std::result::Result<T, Error>;

fn push_residual(
    report: &mut Report,
    name: &str,
    check: &str,
    tol: f64,
    f: impl FnOnce() -> Result<f64>,
) {
    match f() {
        Ok(r) => report.push(CheckRecord::residual(name, check, r, tol)),
        Err(e) => report.push(CheckRecord::error(name, check, e.to_string())),
    }
}

fn unknown_preset(name: &str) -> Error {
    Error::Config {
        field: "preset".into(),
        message: format!("unknown preset `{name}`; available: {}", presets::list().join(", ")),
    }
}

/// The classified-family parameters of a preset, if it names one.
fn classified_params(name: &str) -> Option<(ClassifiedParams, BoundaryCase)> {
    match name {
        "rotated-diag" => None, // needs the angles; handled by callers
        "bc-omega-1" => Some(presets::bc_omega_1()),
        "bc-omega-k" => Some(presets::bc_omega_k()),
        "bc-direction-omega-1" => Some(presets::bc_direction_omega_1()),
        "bc-direction-omega-k" => Some(presets::bc_direction_omega_k()),
        _ => None,
    }
}

fn nls_params(s: &Settings) -> Option<NLSDefectParams> {
    match s.preset.as_deref() {
        Some("pure-transmission") => Some(presets::pure_transmission()),
        Some("resonant") => Some(presets::resonant()),
        Some(_) => None,
        None => Some(s.rep.unwrap_or_else(presets::resonant)),
    }
}

/// Representation selected by the settings, with its display label.
fn resolve_rep(s: &Settings) -> Result<(DefectRep, String)> {
    if let Some(name) = s.preset.as_deref() {
        let rep = match name {
            "pure-transmission" => build_nls_defect(&presets::pure_transmission(), s.n)?,
            "resonant" => build_nls_defect(&presets::resonant(), s.n)?,
            "trig-scalar" => presets::trig_scalar(s.n, s.theta0, 2 * s.n_max),
            "rotated-diag" => {
                build_classified(&presets::rotated_diag(s.theta0, s.mu, s.scale).0)?
            }
            other => match classified_params(other) {
                Some((p, _)) => build_classified(&p)?,
                None => return Err(unknown_preset(other)),
            },
        };
        Ok((rep, name.to_string()))
    } else if let Some(p) = &s.rep {
        Ok((build_nls_defect(p, s.n)?, "custom".into()))
    } else {
        Ok((build_nls_defect(&presets::resonant(), s.n)?, "resonant".into()))
    }
}

fn base_report(task: &str, s: &Settings) -> Report {
    let mut r = Report::new(task, s.seed);
    r.set_parameter("n", s.n);
    r.set_parameter("g", s.g);
    if let Some(p) = &s.preset {
        r.set_parameter("preset", p);
    }
    r
}

fn fmt_complex(v: Complex64) -> String {
    format!("{:.12}{}{:.12}i", v.re, if v.im < 0.0 { "-" } else { "+" }, v.im.abs())
}

fn fmt_tensor(t: &Tensor) -> String {
    if t.rank() == 2 {
        let m = t.to_matrix();
        let rows: Vec<String> = (0..m.nrows())
            .map(|i| {
                (0..m.ncols()).map(|j| fmt_complex(m[(i, j)])).collect::<Vec<_>>().join(", ")
            })
            .collect();
        format!("[{}]", rows.join("; "))
    } else {
        format!("rank-{} tensor, max |entry| {:.6e}", t.rank(), t.max_abs())
    }
}

fn fmt_deltas(deltas: &[Delta]) -> String {
    deltas
        .iter()
        .map(|d| {
            if d.sign > 0.0 {
                format!("delta(p{} - q{})", d.out, d.inp)
            } else {
                format!("delta(p{} + q{})", d.out, d.inp)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn verify_smatrix(s: &Settings) -> Result<Report> {
    let mut report = base_report("verify-smatrix", s);
    let tol = s.tol.unwrap_or(1e-12);
    let sm = DoubledSMatrix::new(s.n, s.g);
    let mut sampler = Sampler::new(s.seed);
    push_residual(&mut report, "unitarity", "S12(k1,k2) S21(k2,k1) = I", tol, || {
        let mut worst: f64 = 0.0;
        for _ in 0..s.count {
            let ks = sampler.generic_momenta(2);
            worst = worst.max(sm.check_unitarity(ks[0], ks[1])?);
        }
        Ok(worst)
    });
    push_residual(&mut report, "yang-baxter", "three-space consistency of S", tol, || {
        let mut worst: f64 = 0.0;
        for _ in 0..s.count {
            let ks = sampler.generic_momenta(3);
            worst = worst.max(sm.check_yang_baxter(ks[0], ks[1], ks[2])?);
        }
        Ok(worst)
    });
    Ok(report)
}

pub fn verify_rep(s: &Settings) -> Result<Report> {
    let mut report = base_report("verify-rep", s);
    let tol = s.tol.unwrap_or(1e-12);
    let (rep, label) = resolve_rep(s)?;
    report.set_parameter("rep", &label);
    let mut sampler = Sampler::new(s.seed);
    let ks = sampler.generic_momenta(s.count);
    push_residual(
        &mut report,
        "constraints",
        "adjoint symmetry and unitarity of the vacuum matrices",
        tol,
        || rep.check_constraints(&ks),
    );
    Ok(report)
}

pub fn verify_rt_equations(s: &Settings) -> Result<Report> {
    let mut report = base_report("verify-rt-equations", s);
    let tol = s.tol.unwrap_or(1e-12);
    let (rep, label) = resolve_rep(s)?;
    report.set_parameter("rep", &label);
    let mut sampler = Sampler::new(s.seed);
    let pairs: Vec<(f64, f64)> =
        (0..s.count).map(|_| (sampler.momentum(), sampler.momentum())).collect();
    push_residual(
        &mut report,
        "exchange-relations",
        "vacuum-projected generator exchange against the doubled S-matrix",
        tol,
        || rep.check_rt_equations(s.g, &pairs),
    );
    Ok(report)
}

pub fn classify(s: &Settings) -> Result<Report> {
    let mut report = base_report("classify-rep", s);
    let tol = s.tol.unwrap_or(1e-12);
    let name = s.preset.as_deref().unwrap_or("rotated-diag");
    let params = match name {
        "rotated-diag" => presets::rotated_diag(s.theta0, s.mu, s.scale).0,
        other => match classified_params(other) {
            Some((p, _)) => p,
            None => {
                return Err(Error::Config {
                    field: "preset".into(),
                    message: format!(
                        "`{other}` is not a classified-family preset; try rotated-diag or bc-*"
                    ),
                })
            }
        },
    };
    report.set_parameter("rep", name);
    let rep = build_classified(&params)?;
    let mut sampler = Sampler::new(s.seed);
    let ks = sampler.generic_momenta(s.count);
    let pairs: Vec<(f64, f64)> =
        (0..s.count).map(|_| (sampler.momentum(), sampler.momentum())).collect();
    push_residual(&mut report, "constraints", "structural constraints", tol, || {
        rep.check_constraints(&ks)
    });
    push_residual(&mut report, "exchange-relations", "generator exchange", tol, || {
        rep.check_rt_equations(s.g, &pairs)
    });
    let k = Complex64::new(1.7, 0.0);
    for (label, mat) in [("R+", &rep.r_plus), ("T+", &rep.t_plus)] {
        match mat.eval(k) {
            Ok(m) => report.push(CheckRecord::value(
                label,
                "vacuum matrix sampled at k = 1.7",
                fmt_complex(m[(0, 0)]),
            )),
            Err(e) => report.push(CheckRecord::error(label, "vacuum matrix", e.to_string())),
        }
    }
    Ok(report)
}

pub fn amplitude(s: &Settings) -> Result<Report> {
    let mut report = base_report("amplitude", s);
    let tol = s.tol.unwrap_or(1e-12);
    let (rep, label) = resolve_rep(s)?;
    report.set_parameter("rep", &label);
    let mut engine = Engine::new(&rep, s.g);
    let mut sampler = Sampler::new(s.seed);

    // Single-particle scattering data at a fixed momentum.
    let q = engine.mom(1.3);
    let p = engine.mom(1.3);
    match engine.vev_amplitude(&[p], &[q]) {
        Ok(amp) => {
            for (i, (deltas, tensor)) in amp.on_support().iter().enumerate() {
                report.push(CheckRecord::value(
                    &format!("one-to-one term {i}"),
                    "single-particle amplitude at k = 1.3",
                    format!("{} x {}", fmt_deltas(deltas), fmt_tensor(tensor)),
                ));
            }
        }
        Err(e) => report.push(CheckRecord::error(
            "one-to-one",
            "single-particle amplitude",
            e.to_string(),
        )),
    }

    push_residual(
        &mut report,
        "one-particle-unitarity",
        "summed out-channel probability equals the identity",
        tol,
        || engine.one_particle_unitarity(1.3),
    );

    push_residual(
        &mut report,
        "contraction-order",
        "two-particle amplitudes agree between contraction orders",
        tol,
        || {
            let mut worst: f64 = 0.0;
            for _ in 0..s.count {
                let ks = sampler.generic_momenta(2);
                let q1 = engine.mom(ks[0]);
                let q2 = engine.mom(ks[1]);
                let p1 = engine.mom(ks[0]);
                let p2 = engine.mom(ks[1]);
                let a = engine.vev_amplitude(&[p1, p2], &[q1, q2])?;
                let b = engine.reorder_oracle(&[p1, p2], &[q1, q2])?;
                worst = worst.max(a.distance_on_support(&b));
            }
            Ok(worst)
        },
    );
    Ok(report)
}

pub fn hierarchy(s: &Settings) -> Result<Report> {
    let mut report = base_report("hierarchy", s);
    let tol = s.tol.unwrap_or(1e-10);
    let (rep, label) = resolve_rep(s)?;
    report.set_parameter("rep", &label);
    let mut engine = Engine::new(&rep, s.g);
    let mut sampler = Sampler::new(s.seed);
    let ks = sampler.generic_momenta(2);
    let q1 = engine.mom(ks[0]);
    let q2 = engine.mom(ks[1]);
    let states = [
        ("one-particle", engine.state(&[q1])?),
        ("two-particle", engine.state(&[q1, q2])?),
    ];
    for (label, state) in &states {
        match engine.check_hierarchy_commutator(1, 2, state, Weight::Signed) {
            Ok(rep) => {
                report.push(CheckRecord::residual(
                    &format!("commutator {label}"),
                    "mixed-parity commutator matches the reflection charge",
                    rep.residual,
                    tol,
                ));
                if let Some(sign) = rep.fitted_sign {
                    report.push(CheckRecord::value(
                        &format!("commutator sign {label}"),
                        "fitted global sign of the commutator identity",
                        format!("{sign:+}"),
                    ));
                }
            }
            Err(e) => report.push(CheckRecord::error(
                &format!("commutator {label}"),
                "mixed-parity commutator",
                e.to_string(),
            )),
        }
        push_residual(
            &mut report,
            &format!("even-order involution {label}"),
            "equal-parity hierarchy operators commute",
            tol,
            || Ok(engine.check_hierarchy_commutator(2, 4, state, Weight::Signed)?.residual),
        );
        push_residual(
            &mut report,
            &format!("absolute-weight involution {label}"),
            "absolute-weight hierarchy operators all commute",
            tol,
            || Ok(engine.check_hierarchy_commutator(1, 2, state, Weight::Absolute)?.residual),
        );
        push_residual(
            &mut report,
            &format!("defect symmetry {label}"),
            "generators commute with the absolute-weight hierarchy",
            tol,
            || engine.check_defect_symmetry(2, 1.1, state),
        );
    }
    Ok(report)
}

fn boundary_preset(s: &Settings) -> Result<(ClassifiedParams, BoundaryCase, String)> {
    let name = s.preset.as_deref().unwrap_or("bc-omega-1");
    match classified_params(name) {
        Some((p, case)) => Ok((p, case, name.to_string())),
        None => Err(Error::Config {
            field: "preset".into(),
            message: format!("`{name}` is not a boundary preset; try bc-omega-1, bc-omega-k, bc-direction-omega-1, bc-direction-omega-k"),
        }),
    }
}

pub fn boundary_derive(s: &Settings) -> Result<Report> {
    let mut report = base_report("boundary-derive", s);
    let (params, case, name) = boundary_preset(s)?;
    report.set_parameter("rep", &name);
    let pair = build_case_solution(case, &params)?;
    match render_differential_form(&pair) {
        Ok(form) => {
            for (i, line) in form.render().lines().enumerate() {
                report.push(CheckRecord::value(
                    &format!("relation {i}"),
                    "differential boundary condition",
                    line.to_string(),
                ));
            }
        }
        Err(e) => report.push(CheckRecord::error(
            "rendering",
            "differential boundary condition",
            e.to_string(),
        )),
    }
    Ok(report)
}

pub fn boundary_verify(s: &Settings) -> Result<Report> {
    let mut report = base_report("boundary-verify", s);
    let tol = s.tol.unwrap_or(1e-12);
    let mut sampler = Sampler::new(s.seed);
    let ks = sampler.generic_momenta(s.count);
    let is_bc_preset =
        s.preset.as_deref().map(|p| classified_params(p).is_some()).unwrap_or(false);
    if is_bc_preset {
        let (params, case, name) = boundary_preset(s)?;
        report.set_parameter("rep", &name);
        let rep = build_classified(&params)?;
        let pair = build_case_solution(case, &params)?;
        for copy in 0..2 {
            let fp = pair.functional_pair(copy);
            push_residual(
                &mut report,
                &format!("functional-equations copy {copy}"),
                "half-line reflection and transmission consistency",
                tol,
                || check_functional_equations(&fp, &rep, &ks),
            );
        }
        push_residual(
            &mut report,
            "free-solutions",
            "boundary operators annihilate the free scattering solutions",
            tol,
            || verify_on_free_solutions(&pair, &rep, &ks),
        );
    } else {
        let params = nls_params(s).ok_or_else(|| Error::Config {
            field: "preset".into(),
            message: "boundary verify needs a jump-matrix family or a bc-* preset".into(),
        })?;
        report.set_parameter("rep", s.preset.as_deref().unwrap_or("resonant"));
        push_residual(
            &mut report,
            "jump-relation",
            "field and derivative limits match the defect jump matrix",
            tol,
            || check_jump_relation(&params, s.n, &ks),
        );
    }
    Ok(report)
}

pub fn breaking_expand(s: &Settings) -> Result<Report> {
    let mut report = base_report("breaking-expand", s);
    let tol = s.tol.unwrap_or(1e-10);
    let name = s.preset.as_deref().unwrap_or("trig-scalar");
    let rep = match name {
        "trig-scalar" => presets::trig_scalar(s.n, s.theta0, 2 * s.n_max),
        "rotated-diag" => build_classified(&presets::rotated_diag(s.theta0, s.mu, s.scale).0)?,
        "pure-transmission" => build_nls_defect(&presets::pure_transmission(), s.n)?,
        "resonant" => build_nls_defect(&presets::resonant(), s.n)?,
        other => return Err(unknown_preset(other)),
    };
    report.set_parameter("rep", name);
    report.set_parameter("n_max", s.n_max);
    match expand_and_classify(&rep, s.n_max, tol) {
        Ok(records) => {
            for r in &records {
                if r.coeff.norm() <= 1e-14 && !r.broken {
                    continue;
                }
                let kind = match r.kind {
                    GenKind::Reflection => "r",
                    GenKind::Transmission => "t",
                };
                report.push(CheckRecord::value(
                    &format!(
                        "{kind}{} order {} entry ({},{})",
                        if r.sign > 0 { "+" } else { "-" },
                        r.order,
                        r.row,
                        r.col
                    ),
                    "expansion coefficient of the generator vacuum value",
                    format!("{} broken={}", fmt_complex(r.coeff), r.broken),
                ));
            }
            let summary = summarize(&records);
            report.push(CheckRecord::value(
                "summary",
                "broken coefficient count and orders",
                format!(
                    "{}/{} broken; reflection orders {:?}; transmission orders {:?}; off-diagonal unbroken: {}",
                    summary.broken,
                    summary.total,
                    summary.broken_orders_reflection,
                    summary.broken_orders_transmission,
                    summary.off_diagonal_unbroken
                ),
            ));
        }
        Err(e) => report.push(CheckRecord::error(
            "expansion",
            "generator vacuum-value expansion",
            e.to_string(),
        )),
    }
    Ok(report)
}

pub fn breaking_classify(s: &Settings) -> Result<Report> {
    let mut report = base_report("breaking-classify", s);
    let tol = s.tol.unwrap_or(1e-10);
    let name = s.preset.as_deref().unwrap_or("rotated-diag");
    if name != "rotated-diag" {
        return Err(Error::Config {
            field: "preset".into(),
            message: format!("`{name}`: dressing data is available for rotated-diag only"),
        });
    }
    report.set_parameter("rep", name);
    let (params, bp) = presets::rotated_diag(s.theta0, s.mu, s.scale);
    let rep = build_classified(&params)?;
    let mut sampler = Sampler::new(s.seed);
    let ks = sampler.generic_momenta(s.count);
    push_residual(
        &mut report,
        "dressing-identities",
        "square and opposite-momentum product of the dressing",
        1e-12,
        || check_lambda_identities(&bp, &ks),
    );
    let plain = DoubledSMatrix::new(bp.n, s.g);
    push_residual(&mut report, "dressed-unitarity", "dressed S-matrix unitarity", 1e-12, || {
        let dressed = build_tilde_s(&plain, &bp)?;
        let mut worst: f64 = 0.0;
        for _ in 0..s.count {
            let ks = sampler.generic_momenta(2);
            worst = worst.max(dressed.check_unitarity(ks[0], ks[1])?);
        }
        Ok(worst)
    });
    push_residual(&mut report, "dressed-yang-baxter", "dressed S-matrix Yang-Baxter", 1e-12, || {
        let dressed = build_tilde_s(&plain, &bp)?;
        let mut worst: f64 = 0.0;
        for _ in 0..s.count {
            let ks = sampler.generic_momenta(3);
            worst = worst.max(dressed.check_yang_baxter(ks[0], ks[1], ks[2])?);
        }
        Ok(worst)
    });
    match tilde_vevs(&rep, &bp, &ks) {
        Ok(v) => {
            let k = Complex64::new(1.7, 0.0);
            for (label, scalar) in [
                ("dressed R+", &v.rho_plus),
                ("dressed R-", &v.rho_minus),
                ("dressed T+", &v.tau_plus),
                ("dressed T-", &v.tau_minus),
            ] {
                match scalar.eval(k) {
                    Ok(val) => report.push(CheckRecord::value(
                        label,
                        "scalar dressed vacuum value at k = 1.7",
                        fmt_complex(val),
                    )),
                    Err(e) => {
                        report.push(CheckRecord::error(label, "dressed vacuum", e.to_string()))
                    }
                }
            }
            push_residual(
                &mut report,
                "reconstruction",
                "undoing the dressing recovers the vacuum matrices",
                tol,
                || check_reconstruction(&rep, &bp, &v, &ks),
            );
        }
        Err(e) => report.push(CheckRecord::error(
            "dressed-vacuum",
            "scalar dressed vacuum values",
            e.to_string(),
        )),
    }
    match expand_and_classify(&rep, s.n_max, tol) {
        Ok(records) => {
            let summary = summarize(&records);
            report.push(CheckRecord::value(
                "plain-basis summary",
                "broken coefficients before dressing",
                format!("{}/{} broken", summary.broken, summary.total),
            ));
        }
        Err(e) => report.push(CheckRecord::error(
            "plain-basis summary",
            "broken coefficients",
            e.to_string(),
        )),
    }
    Ok(report)
}

pub fn presets_list(s: &Settings) -> Result<Report> {
    let mut report = base_report("presets", s);
    for name in presets::list() {
        report.push(CheckRecord::value(name, "built-in parameter set", String::new()));
    }
    Ok(report)
}
