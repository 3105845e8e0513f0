//! One function per subcommand. Each returns the `results` block of the
//! report and writes the requested artifact file.

use crate::config::RunConfig;
use crate::emit::{emit_profile, fmt17, Table};
use crate::error::CliError;
use emden_core::{
    bootstrap, bubble_form, decay_fit, energy_identity, entire_profile_with,
    find_threshold_with, ie_constants, integrate, pohozaev_ball, pohozaev_entire, pohozaev_q,
    radial_newton, regime, singular_form, verify_ie, BootstrapTrace, FormField, IdentityReport,
    Quadrature, RadialField, RadialProfile64, RegimeTag, SampledSolution, Subject, SystemParams,
    SystemParams64, ThresholdSearch, TrajectoryOutcome,
};
use emden_core::{grid::log_grid, model::residual_system};
use serde_json::{json, Value};

pub fn make_params(cfg: &RunConfig) -> Result<SystemParams64, CliError> {
    let p = cfg
        .p
        .ok_or_else(|| CliError::usage("--p is required for this command"))?;
    Ok(SystemParams::new(cfg.n, p)?)
}

fn require_shooting_admissible(params: &SystemParams64) -> Result<(), CliError> {
    if !params.shooting_admissible() {
        let mut reasons = Vec::new();
        if params.p() < params.critical() {
            reasons.push(format!("p < 2*-1 = {}", params.critical()));
        }
        if params.p() < 2.0 {
            reasons.push("p < 2".to_string());
        }
        return Err(CliError::regime(format!(
            "regime not shooting-admissible ({})",
            reasons.join(", ")
        )));
    }
    Ok(())
}

fn regime_tag_str(tag: RegimeTag) -> &'static str {
    match tag {
        RegimeTag::NoPositiveSolution => "no_positive_solution",
        RegimeTag::Subcritical => "subcritical",
        RegimeTag::Critical => "critical",
        RegimeTag::Supercritical => "supercritical",
    }
}

fn decay_fit_block(profile: &RadialProfile64) -> Result<Value, CliError> {
    let fit = decay_fit(profile, (0.5, 0.9))?;
    Ok(json!({
        "rate": fit.rate,
        "amplitude_band": [fit.amplitude_band.0, fit.amplitude_band.1],
        "window": [fit.window.0, fit.window.1],
        "regression_residual": fit.regression_residual,
        "samples_used": fit.samples_used,
    }))
}

fn maybe_emit_profile(profile: &RadialProfile64, cfg: &RunConfig) -> Result<(), CliError> {
    if let Some(path) = &cfg.out {
        emit_profile(profile, cfg.format, path)?;
    }
    Ok(())
}

/// `shoot`: threshold search, threshold profile, decay fit.
pub fn shoot(cfg: &RunConfig) -> Result<Value, CliError> {
    let params = make_params(cfg)?;
    require_shooting_admissible(&params)?;
    let search = ThresholdSearch {
        bisect_tol: cfg.bisect_tol,
        r_max: cfg.r_max,
        tol: cfg.tol,
        ..Default::default()
    };
    let found = find_threshold_with(&params, &search)?;
    let profile = &found.profile_at_star;
    let fit = decay_fit_block(profile)?;
    maybe_emit_profile(profile, cfg)?;
    Ok(json!({
        "a_star": found.a_star,
        "bracket": [found.bracket.0, found.bracket.1],
        "iterations": found.iterations,
        "detect_horizon": found.detect_horizon,
        "lo_outcome": found.lo_outcome.tag(),
        "hi_outcome": found.hi_outcome.tag(),
        "outcome": profile.outcome.tag(),
        "r_event": profile.outcome.radius(),
        "sync_deviation": profile.sync_deviation() / profile.max_u(),
        "decay": fit,
        "q": pohozaev_q(&params),
    }))
}

/// `classify`: single trajectory at the given shooting parameter.
pub fn classify_cmd(cfg: &RunConfig) -> Result<Value, CliError> {
    let params = make_params(cfg)?;
    let a = cfg
        .a
        .ok_or_else(|| CliError::usage("--a is required for classify"))?;
    let profile = integrate(&params, a, cfg.r_max, cfg.tol)?;
    maybe_emit_profile(&profile, cfg)?;
    // decay window boundaries ride along whenever the profile supports a fit
    let fit = if profile.outcome.is_entire() {
        decay_fit_block(&profile).ok()
    } else {
        None
    };
    Ok(json!({
        "a": a,
        "outcome": profile.outcome.tag(),
        "r_event": profile.outcome.radius(),
        "sync_deviation": profile.sync_deviation() / profile.max_u(),
        "samples": profile.samples.len(),
        "decay": fit,
    }))
}

/// `sweep`: a-sweep (log-spaced, `--p` fixed) or p-sweep (linear, no `--p`).
pub fn sweep(cfg: &RunConfig) -> Result<Value, CliError> {
    let g = cfg.grid;
    if cfg.p.is_some() {
        // a-sweep
        let params = make_params(cfg)?;
        if g.lo <= 0.0 {
            return Err(CliError::usage("a-sweep grid must start above zero"));
        }
        let mut table = Table::new(&["a", "outcome", "r_event", "error"]);
        let mut rows_meta = Vec::new();
        let mut prev_v: Option<bool> = None;
        let mut flips = 0usize;
        let mut first_flip = None;
        for k in 0..g.count {
            let t = k as f64 / (g.count - 1) as f64;
            let a = g.lo * (g.hi / g.lo).powf(t);
            match integrate(&params, a, cfg.r_max, cfg.tol) {
                Ok(prof) => {
                    let is_v = matches!(prof.outcome, TrajectoryOutcome::VVanished(_));
                    if let Some(prev) = prev_v {
                        if prev != is_v {
                            flips += 1;
                            first_flip.get_or_insert(a);
                        }
                    }
                    prev_v = Some(is_v);
                    table.push(vec![
                        fmt17(a),
                        prof.outcome.tag().into(),
                        fmt17(prof.outcome.radius()),
                        String::new(),
                    ]);
                    rows_meta.push(json!({
                        "a": a,
                        "outcome": prof.outcome.tag(),
                        "r_event": prof.outcome.radius(),
                    }));
                }
                Err(e) => {
                    table.push(vec![fmt17(a), String::new(), String::new(), e.to_string()]);
                    rows_meta.push(json!({ "a": a, "error": e.to_string() }));
                }
            }
        }
        if let Some(path) = &cfg.out {
            table.emit(
                cfg.format,
                path,
                json!({"n": params.n(), "p": params.p(), "sweep": "a", "r_max": cfg.r_max}),
            )?;
        }
        // long sweeps report through the artifact; stdout stays a summary
        let rows = if rows_meta.len() <= 64 {
            Value::Array(rows_meta)
        } else {
            Value::String(format!("{} rows (see artifact)", rows_meta.len()))
        };
        Ok(json!({
            "sweep": "a",
            "points": g.count,
            "predicate_flips": flips,
            "first_flip_a": first_flip,
            "rows": rows,
        }))
    } else {
        // p-sweep at fixed a (default 1)
        let a = cfg.a.unwrap_or(1.0);
        let mut table = Table::new(&["p", "regime", "q", "outcome", "r_event", "error"]);
        let mut rows_meta = Vec::new();
        for k in 0..g.count {
            let t = k as f64 / (g.count - 1) as f64;
            let p = g.lo + (g.hi - g.lo) * t;
            let (regime_s, q_s, outcome_s, r_s, err_s, meta) = match SystemParams::new(cfg.n, p) {
                Ok(params) => {
                    let reg = regime_tag_str(regime(&params).tag);
                    let q = pohozaev_q(&params);
                    match integrate(&params, a, cfg.r_max, cfg.tol) {
                        Ok(prof) => (
                            reg.to_string(),
                            fmt17(q),
                            prof.outcome.tag().to_string(),
                            fmt17(prof.outcome.radius()),
                            String::new(),
                            json!({"p": p, "regime": reg, "q": q,
                                   "outcome": prof.outcome.tag(),
                                   "r_event": prof.outcome.radius()}),
                        ),
                        Err(e) => (
                            reg.to_string(),
                            fmt17(q),
                            String::new(),
                            String::new(),
                            e.to_string(),
                            json!({"p": p, "regime": reg, "q": q, "error": e.to_string()}),
                        ),
                    }
                }
                Err(e) => (
                    String::new(),
                    String::new(),
                    String::new(),
                    String::new(),
                    e.to_string(),
                    json!({"p": p, "error": e.to_string()}),
                ),
            };
            table.push(vec![fmt17(p), regime_s, q_s, outcome_s, r_s, err_s]);
            rows_meta.push(meta);
        }
        if let Some(path) = &cfg.out {
            table.emit(
                cfg.format,
                path,
                json!({"n": cfg.n, "sweep": "p", "a": a, "r_max": cfg.r_max}),
            )?;
        }
        let rows = if rows_meta.len() <= 64 {
            Value::Array(rows_meta)
        } else {
            Value::String(format!("{} rows (see artifact)", rows_meta.len()))
        };
        Ok(json!({
            "sweep": "p",
            "points": g.count,
            "a": a,
            "rows": rows,
        }))
    }
}

/// `verify-forms`: residuals of the regime's closed forms on the grid.
pub fn verify_forms(cfg: &RunConfig) -> Result<Value, CliError> {
    let params = make_params(cfg)?;
    let reg = regime(&params);
    let has_singular = params.p() > params.serrin();
    let has_bubble = reg.tag == RegimeTag::Critical;
    if !has_singular && !has_bubble {
        return Err(CliError::regime(format!(
            "no closed form exists at p <= n/(n-2) = {}",
            params.serrin()
        )));
    }
    let grid = log_grid(cfg.grid.lo, cfg.grid.hi, cfg.grid.count)
        .map_err(|e| CliError::usage(e.to_string()))?;

    let mut columns = vec!["r"];
    let singular = if has_singular {
        columns.extend(["singular_res_u", "singular_res_v"]);
        Some(singular_form(&params)?)
    } else {
        None
    };
    let bubble = if has_bubble {
        columns.extend(["bubble_res_u", "bubble_res_v"]);
        Some(bubble_form(&params, 1.0, vec![0.0; params.n() as usize])?)
    } else {
        None
    };

    let mut table = Table::new(&columns);
    let mut max_singular = 0.0f64;
    let mut max_bubble = 0.0f64;
    for &r in &grid {
        let mut row = vec![fmt17(r)];
        if let Some(form) = &singular {
            let field = FormField(form);
            let (ru, rv) = residual_system(&field, &field, &params, r, 1e-4)?;
            max_singular = max_singular.max(ru).max(rv);
            row.push(fmt17(ru));
            row.push(fmt17(rv));
        }
        if let Some(form) = &bubble {
            let field = FormField(form);
            let (ru, rv) = residual_system(&field, &field, &params, r, 1e-4)?;
            max_bubble = max_bubble.max(ru).max(rv);
            row.push(fmt17(ru));
            row.push(fmt17(rv));
        }
        table.push(row);
    }
    if let Some(path) = &cfg.out {
        table.emit(
            cfg.format,
            path,
            json!({"n": params.n(), "p": params.p(), "grid": cfg.grid}),
        )?;
    }

    let singular_amp = singular.as_ref().map(|f| match &f.kind {
        emden_core::FormKind::SingularPower { amplitude } => *amplitude,
        _ => unreachable!(),
    });
    let bubble_amp = bubble.as_ref().map(|_| emden_core::bubble_amplitude(&params));
    Ok(json!({
        "regime": regime_tag_str(reg.tag),
        "singular": singular.as_ref().map(|_| json!({
            "amplitude": singular_amp,
            "exponent": params.slow_rate(),
            "max_residual": max_singular,
        })),
        "bubble": bubble.as_ref().map(|_| json!({
            "amplitude": bubble_amp,
            "fast_rate": params.fast_rate(),
            "max_residual": max_bubble,
        })),
    }))
}

fn report_block(rep: &IdentityReport<f64>) -> Value {
    json!({
        "name": rep.name,
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "residual": rep.residual,
        "components": rep.components.iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>(),
        "nodes": rep.nodes,
        "input_hash": format!("{:016x}", rep.input_hash),
    })
}

/// `identities`: the checks applicable to the regime of (n, p).
pub fn identities_cmd(cfg: &RunConfig) -> Result<Value, CliError> {
    let params = make_params(cfg)?;
    let reg = regime(&params);
    let q = pohozaev_q(&params);
    let quad = Quadrature {
        nodes: cfg.grid.count,
        ..Default::default()
    };
    let mut results = json!({
        "regime": regime_tag_str(reg.tag),
        "q": q,
        "ball_admissible": q < 0.0,
    });
    let obj = results.as_object_mut().unwrap();
    let mut components = Table::new(&["report", "component", "value"]);

    match reg.tag {
        RegimeTag::Critical => {
            let bubble = bubble_form(&params, 1.0, vec![0.0; params.n() as usize])?;
            let energy = energy_identity(&Subject::Form(&bubble), &quad)?;
            let poho = pohozaev_entire(&Subject::Form(&bubble), &quad)?;
            for (k, v) in energy.components.iter().chain(poho.report.components.iter()) {
                components.push(vec![energy.name.clone(), k.clone(), fmt17(*v)]);
            }
            obj.insert("energy".into(), report_block(&energy));
            obj.insert("pohozaev_entire".into(), report_block(&poho.report));
            obj.insert("p_implied".into(), json!(poho.p_implied));
        }
        // the ball solution exists whenever Q < 0, i.e. anywhere below the
        // critical exponent, including the entire-space nonexistence range
        RegimeTag::Subcritical | RegimeTag::NoPositiveSolution if params.p() >= 2.0 => {
            // Dirichlet ball solution from the symmetric trajectory
            let profile = integrate(&params, 1.0, cfg.r_max, cfg.tol)?;
            if !matches!(profile.outcome, TrajectoryOutcome::BothVanished(_)) {
                return Err(CliError::numeric(
                    "identity",
                    format!(
                        "expected a Dirichlet ball profile at a = 1, got {}",
                        profile.outcome.tag()
                    ),
                ));
            }
            let energy = energy_identity(&Subject::Profile(&profile), &quad)?;
            let ball = pohozaev_ball(&profile, &quad)?;
            for (k, v) in energy.components.iter().chain(ball.report.components.iter()) {
                components.push(vec![energy.name.clone(), k.clone(), fmt17(*v)]);
            }
            obj.insert("energy".into(), report_block(&energy));
            obj.insert("pohozaev_ball".into(), report_block(&ball.report));
            obj.insert("ball_radius".into(), json!(profile.outcome.radius()));
        }
        _ => {
            obj.insert(
                "note".into(),
                json!(
                    "no quadrature identity applies: entire-space identities need the \
                     critical (fast-decay) regime, the ball identity a subcritical \
                     Dirichlet solution"
                ),
            );
        }
    }
    if let Some(path) = &cfg.out {
        components.emit(
            cfg.format,
            path,
            json!({"n": params.n(), "p": params.p(), "q": q}),
        )?;
    }
    Ok(results)
}

/// `decay`: entire threshold profile plus its decay fit.
pub fn decay(cfg: &RunConfig) -> Result<Value, CliError> {
    let params = make_params(cfg)?;
    require_shooting_admissible(&params)?;
    let profile = entire_profile_with(&params, cfg.r_max, cfg.tol)?;
    let fit = decay_fit_block(&profile)?;
    maybe_emit_profile(&profile, cfg)?;
    Ok(json!({
        "outcome": profile.outcome.tag(),
        "r_max": profile.outcome.radius(),
        "slow_rate_target": params.slow_rate(),
        "fast_rate_target": params.fast_rate(),
        "sync_deviation": profile.sync_deviation() / profile.max_u(),
        "decay": fit,
    }))
}

/// `bootstrap`: the exponent recurrence, stopping at `j0` when it exists.
pub fn bootstrap_cmd(cfg: &RunConfig) -> Result<Value, CliError> {
    let params = make_params(cfg)?;
    let j_max = BootstrapTrace::<f64>::j0_bound(params.n(), params.p())
        .unwrap_or(0)
        .max(30);
    let trace = bootstrap(&params, j_max);
    let mut table = Table::new(&["j", "a_j", "b_j"]);
    for (j, (&a, &b)) in trace.a_seq.iter().zip(trace.b_seq.iter()).enumerate() {
        table.push(vec![j.to_string(), fmt17(a), fmt17(b)]);
    }
    if let Some(path) = &cfg.out {
        table.emit(
            cfg.format,
            path,
            json!({"n": params.n(), "p": params.p(), "j0": trace.j0}),
        )?;
    }
    Ok(json!({
        "serrin": params.serrin(),
        "below_serrin": params.p() < params.serrin(),
        "j0": trace.j0,
        "terms": trace.a_seq.len(),
        "a_seq": trace.a_seq,
        "b_seq": trace.b_seq,
    }))
}

/// `potential`: Newton-kernel reconstruction of the regime's closed form.
pub fn potential(cfg: &RunConfig) -> Result<Value, CliError> {
    let params = make_params(cfg)?;
    let reg = regime(&params);
    let form = if reg.tag == RegimeTag::Critical {
        bubble_form(&params, 1.0, vec![0.0; params.n() as usize])?
    } else if params.p() > params.serrin() {
        singular_form(&params)?
    } else {
        return Err(CliError::regime(format!(
            "no closed form to verify at p <= n/(n-2) = {}",
            params.serrin()
        )));
    };
    let sol = SampledSolution::from_form(&form, cfg.grid.lo, cfg.grid.hi, cfg.grid.count)?;
    let report = verify_ie(&sol)?;

    if let Some(path) = &cfg.out {
        // reconstruction table alongside the original components
        let (c1, c2) = ie_constants(&params);
        let p = params.p();
        let fu: Vec<f64> = sol
            .u
            .iter()
            .zip(sol.v.iter())
            .map(|(&u, &v)| u.powf(p - 1.0) * v)
            .collect();
        let fv: Vec<f64> = sol.u.iter().map(|&u| u.powf(p)).collect();
        let tu = (p - 1.0) * sol.tail_u + sol.tail_v;
        let tv = p * sol.tail_u;
        let gu = radial_newton(&RadialField::new(sol.grid.clone(), fu, Some(tu))?, params.n())?;
        let gv = radial_newton(&RadialField::new(sol.grid.clone(), fv, Some(tv))?, params.n())?;
        let mut table = Table::new(&["r", "u", "v", "u_recon", "v_recon"]);
        for k in 0..sol.grid.len() {
            table.push(vec![
                fmt17(sol.grid[k]),
                fmt17(sol.u[k]),
                fmt17(sol.v[k]),
                fmt17(c1 * gu.values()[k]),
                fmt17(c2 * gv.values()[k]),
            ]);
        }
        table.emit(
            cfg.format,
            path,
            json!({"n": params.n(), "p": params.p(), "c1": c1, "c2": c2}),
        )?;
    }
    Ok(json!({
        "form": if reg.tag == RegimeTag::Critical { "bubble" } else { "singular_power" },
        "u_deviation": report.u_deviation,
        "v_deviation": report.v_deviation,
        "c1": report.c1,
        "c2": report.c2,
        "nodes": report.nodes,
        "tail_u": report.tail_u,
        "tail_v": report.tail_v,
    }))
}
