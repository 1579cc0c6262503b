use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use super::artifacts::Artifacts;
use super::config::{ExperimentConfig, ExperimentKind, SweepRegime};
use crate::ansatz::AnsatzRecipe;
use crate::error::{Error, Result};
use crate::presets::{high_s_recipe, low_s_recipe, plane_gaussian_expansion};
use crate::residual::{phase_correction_ablation, predicted_slope, residual, tau_sweep, upgrade_const, SweepReport};
use crate::spectral::jitter_tau;
use crate::xray::{stability_experiment, StabilityConfig, StabilitySetup};

/// One acceptance check of a run.
#[derive(Clone, Debug, Serialize)]
pub struct Gate {
    pub name: String,
    pub measured: f64,
    pub target: String,
    pub pass: bool,
}

impl Gate {
    fn new(name: &str, measured: f64, target: String, pass: bool) -> Self {
        Self {
            name: name.into(),
            measured,
            target,
            pass,
        }
    }

    fn at_most(name: &str, measured: f64, bound: f64) -> Self {
        Self::new(name, measured, format!("<= {bound}"), measured <= bound)
    }

    fn within(name: &str, measured: f64, center: f64, tol: f64) -> Self {
        Self::new(
            name,
            measured,
            format!("{center} +- {tol}"),
            (measured - center).abs() <= tol,
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunOutcome {
    pub kind: ExperimentKind,
    pub manifest_hash: String,
    pub dir: PathBuf,
    pub gates: Vec<Gate>,
    pub notes: Vec<String>,
    pub artifacts: Vec<String>,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.gates.iter().all(|g| g.pass)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{} [{}]\n", self.kind.name(), &self.manifest_hash[..16]);
        for n in &self.notes {
            s.push_str(&format!("  {n}\n"));
        }
        for g in &self.gates {
            s.push_str(&format!(
                "  gate {:<28} measured {:>12.6} target {:<16} {}\n",
                g.name,
                g.measured,
                g.target,
                if g.pass { "PASS" } else { "FAIL" }
            ));
        }
        s.push_str(&format!(
            "  {}\n",
            if self.passed() {
                "all gates pass"
            } else {
                "gate failure"
            }
        ));
        s
    }
}

/// 2 for configuration problems, 3 for resolution refusals, 4 for numerical failures.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::InvalidInput(_) | Error::Domain { .. } | Error::Regime { .. } => 2,
        Error::Resolution { .. } => 3,
        Error::SweepAborted { source, .. } => exit_code(source),
        _ => 4,
    }
}

struct Outcome {
    gates: Vec<Gate>,
    notes: Vec<String>,
}

/// Resolves `config`, runs it and writes artifacts to `<out_root>/<kind>`.
pub fn run(config: &ExperimentConfig, out_root: &Path) -> Result<RunOutcome> {
    let c = config.resolve()?;
    let hash = c.manifest_hash()?;
    let dir = out_root.join(c.kind.name());
    let mut art = Artifacts::create(&dir, &hash)?;
    art.text(
        "config.resolved.toml",
        &format!("# manifest_hash={hash}\n{}", c.to_toml()?),
    )?;
    let out = match c.kind {
        ExperimentKind::ConstcoefDemo => constcoef_demo(&c, &mut art)?,
        ExperimentKind::ExpansionCheck => expansion_check(&c, &mut art)?,
        ExperimentKind::ResidualSweep => residual_sweep(&c, &mut art)?,
        ExperimentKind::PhaseAblation => phase_ablation(&c, &mut art)?,
        ExperimentKind::XrayRecover => xray_recover(&c, &mut art)?,
        ExperimentKind::StabilityExp => stability_exp(&c, &mut art)?,
    };
    let mut outcome = RunOutcome {
        kind: c.kind,
        manifest_hash: hash.clone(),
        dir,
        gates: out.gates,
        notes: out.notes,
        artifacts: Vec::new(),
    };
    art.text("summary.txt", &format!("# manifest_hash={hash}\n{}", outcome.summary()))?;
    art.raw_json(
        "manifest.json",
        json!({
            "manifest_hash": hash,
            "kind": c.kind.name(),
            "schema_version": c.schema_version,
            "code_version": env!("CARGO_PKG_VERSION"),
            "config": c,
            "gates": outcome.gates,
            "artifacts": art.written(),
        }),
    )?;
    outcome.artifacts = art.written().to_vec();
    Ok(outcome)
}

fn constcoef_demo(c: &ExperimentConfig, art: &mut Artifacts) -> Result<Outcome> {
    let (s, m, tau) = (c.s.unwrap(), c.m.unwrap(), c.tau.unwrap());
    let recipe = AnsatzRecipe::ConstCoef { s, m };
    let (ansatz, medium) = recipe.build(tau, 1)?;
    let tau = jitter_tau(ansatz.grid(), tau, s);
    let u = ansatz.evaluate(tau)?;
    let r0 = residual(&medium, &u, tau, 0.0)?;
    let r1 = residual(&medium, &u, tau, 1.0)?;
    let (_, up) = upgrade_const(&ansatz, &medium, tau)?;
    let g = ansatz.grid();
    let n1 = g.sizes()[1];
    let j = (0..n1)
        .min_by(|a, b| g.coordinate(1, *a).abs().total_cmp(&g.coordinate(1, *b).abs()))
        .unwrap_or(0);
    let rows: Vec<Vec<f64>> = (0..g.sizes()[0])
        .map(|i| {
            let v = u.at(g.flat_index([i, j]));
            vec![g.coordinate(0, i), v.re, v.im, v.norm()]
        })
        .collect();
    art.dat("profile.dat", &["x1", "re_u", "im_u", "abs_u"], &[rows])?;
    let pred = predicted_slope(&recipe)?;
    art.json(
        "constcoef.json",
        "demo",
        &json!({
            "tau": tau,
            "residual_b0": r0,
            "residual_b1": r1,
            "predicted_slope": pred,
            "upgrade": up,
            "ansatz": ansatz.manifest(),
        }),
    )?;
    Ok(Outcome {
        gates: vec![Gate::at_most("upgraded residual", up.residual_after, 1e-8)],
        notes: vec![
            format!("tau = {tau:.6} (jittered off resonance), residual {r0:.3e} (beta = 1: {r1:.3e})"),
            format!("predicted residual order tau^{:.2}: {}", pred.slope, pred.note),
            format!("upgrade correction / ansatz = {:.3e}", up.ratio()),
        ],
    })
}

fn expansion_check(c: &ExperimentConfig, art: &mut Artifacts) -> Result<Outcome> {
    let r = plane_gaussian_expansion(c.s.unwrap(), c.taus.as_deref().unwrap())?;
    let rows: Vec<Vec<f64>> = r
        .taus
        .iter()
        .zip(&r.d0)
        .zip(&r.d1)
        .map(|((t, a), b)| vec![*t, *a, *b])
        .collect();
    art.csv("expansion.csv", &["tau", "d0", "d1"], &rows)?;
    art.dat("expansion.dat", &["tau", "d0", "d1"], &[rows])?;
    art.json("expansion.json", "report", &r)?;
    Ok(Outcome {
        gates: vec![
            Gate::within("D0 slope", r.fit_d0.slope, r.expected_d0, 0.2),
            Gate::within("D1 slope", r.fit_d1.slope, r.expected_d1, 0.2),
        ],
        notes: vec![format!(
            "s = {}: D0 slope {:.3} (expected {:.3}), D1 slope {:.3} (expected {:.3})",
            r.s, r.fit_d0.slope, r.expected_d0, r.fit_d1.slope, r.expected_d1
        )],
    })
}

fn sweep_rows(r: &SweepReport) -> Vec<Vec<f64>> {
    r.taus
        .iter()
        .zip(&r.residual_b0)
        .zip(&r.residual_b1)
        .map(|((t, a), b)| vec![*t, *a, *b])
        .collect()
}

fn refinement_gate(name: &str, r: &SweepReport) -> Option<Gate> {
    r.refinement
        .as_ref()
        .map(|f| Gate::at_most(name, f.shift, crate::residual::REFINEMENT_TOLERANCE))
}

fn residual_sweep(c: &ExperimentConfig, art: &mut Artifacts) -> Result<Outcome> {
    let recipe = match &c.recipe {
        Some(r) => r.clone(),
        None => {
            let s = c.s.unwrap();
            match c.regime.unwrap() {
                SweepRegime::Const => AnsatzRecipe::ConstCoef { s, m: c.m.unwrap() },
                SweepRegime::High => high_s_recipe(s, c.m.unwrap(), c.potential.unwrap()),
                SweepRegime::Low => low_s_recipe(s, c.potential.unwrap(), c.with_phi1.unwrap()),
            }
        }
    };
    let r = tau_sweep(&recipe, c.taus.as_deref().unwrap(), c.refine_check.unwrap())?;
    let bound = c.slope_gate.unwrap_or(match recipe {
        AnsatzRecipe::ConstCoef { m, .. } => -(m as f64 - 0.3),
        _ => r.prediction.slope + 0.3,
    });
    let rows = sweep_rows(&r);
    art.csv("residuals.csv", &["tau", "residual_b0", "residual_b1"], &rows)?;
    art.dat("residuals.dat", &["tau", "residual_b0", "residual_b1"], &[rows])?;
    art.json("sweep.json", "report", &r)?;
    let mut gates = vec![Gate::at_most("residual slope", r.slope(), bound)];
    gates.extend(refinement_gate("refinement shift", &r));
    Ok(Outcome {
        gates,
        notes: vec![
            format!("measured slope {:.3} +- {:.3}", r.fit.slope, r.fit.stderr),
            format!("predicted slope {:.3}: {}", r.prediction.slope, r.prediction.note),
            format!("beta = 1 slope {:.3}", r.fit_b1.slope),
        ],
    })
}

fn phase_ablation(c: &ExperimentConfig, art: &mut Artifacts) -> Result<Outcome> {
    let recipe = low_s_recipe(c.s.unwrap(), c.potential.unwrap(), true);
    let r = phase_correction_ablation(&recipe, c.taus.as_deref().unwrap(), c.refine_check.unwrap())?;
    let rows: Vec<Vec<f64>> = r
        .with_phi1
        .taus
        .iter()
        .zip(&r.without_phi1.residual_b0)
        .zip(&r.with_phi1.residual_b0)
        .map(|((t, a), b)| vec![*t, *a, *b])
        .collect();
    art.csv("ablation.csv", &["tau", "without_phi1", "with_phi1"], &rows)?;
    art.dat("ablation.dat", &["tau", "without_phi1", "with_phi1"], &[rows])?;
    art.json("ablation.json", "report", &r)?;
    let (off, on) = r.slopes();
    let mut gates = vec![
        Gate::new("slope without phi_1", off, "in [-0.1, 0.1]".into(), off.abs() <= 0.1),
        Gate::at_most("slope with phi_1", on, -0.4),
    ];
    gates.extend(refinement_gate("refinement without phi_1", &r.without_phi1));
    gates.extend(refinement_gate("refinement with phi_1", &r.with_phi1));
    Ok(Outcome {
        gates,
        notes: vec![
            format!(
                "without phi_1: {:.3} (predicted {:.3})",
                off, r.without_phi1.prediction.slope
            ),
            format!("with phi_1: {:.3} (predicted {:.3})", on, r.with_phi1.prediction.slope),
        ],
    })
}

fn xray_recover(c: &ExperimentConfig, art: &mut Artifacts) -> Result<Outcome> {
    let x = c.xray.clone().unwrap();
    let cfg = StabilityConfig {
        s: c.s.unwrap(),
        phantom: x.phantom.clone(),
        grid_size: x.grid_size,
        period: x.period,
        n_base: x.n_base,
        n_dirs: x.n_dirs,
        iterations: x.iterations,
        ..StabilityConfig::default()
    };
    let setup = StabilitySetup::new(&cfg)?;
    let data = if x.noise > 0.0 {
        setup.clean.with_noise(x.noise, x.seed)
    } else {
        setup.clean.clone()
    };
    let mut body = Vec::new();
    data.write_csv(&mut body)?;
    art.text(
        "xray_data.csv",
        &format!("# manifest_hash={}\n{}", art.hash(), String::from_utf8_lossy(&body)),
    )?;
    let (q, its) = setup.recover(x.noise, x.lambda, x.seed, x.iterations)?;
    let err = setup.relative_error(&q)?;
    let g = &setup.grid;
    let truth = &setup.weighted.difference;
    let blocks: Vec<Vec<Vec<f64>>> = (0..g.sizes()[0])
        .map(|i| {
            (0..g.sizes()[1])
                .map(|j| {
                    let k = g.flat_index([i, j]);
                    let p = g.point(k);
                    vec![p[0], p[1], q.at(k).re, q.at(k).im, truth.at(k).re]
                })
                .collect()
        })
        .collect();
    art.dat("recovered.dat", &["x1", "x2", "re_q", "im_q", "true_q"], &blocks)?;
    art.json(
        "xray.json",
        "recovery",
        &json!({
            "relative_error": err,
            "cg_iterations": its,
            "operator_norm": setup.operator_norm,
            "rays": setup.clean.geometry.len(),
            "grid": g.descriptor(),
            "medium": setup.medium.descriptor(),
        }),
    )?;
    Ok(Outcome {
        gates: vec![Gate::at_most("relative L2 error", err, x.error_gate)],
        notes: vec![format!(
            "{} rays, {} CG iterations, relative error {err:.4}",
            setup.clean.geometry.len(),
            its
        )],
    })
}

fn stability_exp(c: &ExperimentConfig, art: &mut Artifacts) -> Result<Outcome> {
    let cfg = c.stability.clone().unwrap();
    let r = stability_experiment(&cfg)?;
    let mut header = vec!["delta", "tau", "noise_level", "lambda", "median_error"];
    let seed_cols: Vec<String> = cfg.seeds.iter().map(|s| format!("error_seed_{s}")).collect();
    header.extend(seed_cols.iter().map(|s| s.as_str()));
    let rows: Vec<Vec<f64>> = r
        .cells
        .iter()
        .map(|cell| {
            let mut row = vec![cell.delta, cell.tau, cell.noise_level, cell.lambda, cell.median_error];
            row.extend(&cell.errors);
            row
        })
        .collect();
    art.csv("stability.csv", &header, &rows)?;
    art.dat("stability.dat", &header, &[rows])?;
    art.json("stability.json", "report", &r)?;
    let [lo, hi] = cfg.gamma_window;
    Ok(Outcome {
        gates: vec![Gate::new(
            "fitted / predicted exponent",
            r.ratio,
            format!("in [{lo}, {hi}]"),
            r.within_window,
        )],
        notes: vec![
            format!(
                "fitted exponent {:.4} +- {:.4}, predicted gamma {:.4}",
                r.fitted_exponent, r.fit.stderr, r.predicted_gamma
            ),
            format!("noiseless baseline error {:.4}", r.baseline_error),
            r.limitation.clone(),
        ],
    })
}
