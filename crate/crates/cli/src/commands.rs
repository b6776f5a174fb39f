//! Command implementations.

use crate::config::Config;
use crate::output::{fmt_f, json_c, write_json, write_text, Csv};
use anyhow::{anyhow, bail, Result};
use clap::Args;
use num_complex::Complex64 as C;
use p4ell::boutroux::{self, BoutrouxPoint, SolveOptions};
use p4ell::curve::{periods as curve_periods, CurveSpec, CycleKind, Integrand};
use p4ell::monodromy::{self, MonodromyData};
use p4ell::verify::{self, IntegrateOptions};
use p4ell::wkb;
use std::path::PathBuf;

/// Marker type: errors caused by invalid user input (exit code 2).
#[derive(Debug)]
pub struct InvalidInput(pub String);

impl std::fmt::Display for InvalidInput {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for InvalidInput {}

fn invalid(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(InvalidInput(msg.into()))
}

fn parse_c(s: &str) -> Result<C> {
    // "re" or "re,im"
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => Ok(C::new(re.trim().parse()?, 0.0)),
        [re, im] => Ok(C::new(re.trim().parse()?, im.trim().parse()?)),
        _ => bail!("expected `re` or `re,im`, got {s}"),
    }
}

fn monodromy_from(alpha: C, beta: C, s_spec: &str) -> Result<MonodromyData> {
    let s: Vec<&str> = s_spec.split(';').map(str::trim).collect();
    if s.len() != 3 && s.len() != 4 {
        return Err(invalid(format!(
            "need 3 Stokes coefficients (s4 solved from the surface) or 4, got {}",
            s.len()
        )));
    }
    let vals: Vec<C> = s
        .iter()
        .map(|t| parse_c(t))
        .collect::<Result<_>>()
        .map_err(|e| invalid(format!("bad Stokes coefficient: {e}")))?;
    let s4 = if vals.len() == 4 {
        vals[3]
    } else {
        monodromy::solve_s4(alpha, beta, vals[0], vals[1], vals[2])
            .map_err(|e| invalid(e.to_string()))?
    };
    let md = MonodromyData::new(alpha, beta, [vals[0], vals[1], vals[2], s4]);
    let res = monodromy::m0_residual(&md).norm();
    if res > 1e-9 {
        return Err(invalid(format!(
            "Stokes data violates the monodromy surface (residual {res:.3e})"
        )));
    }
    Ok(md)
}

fn default_grid(n: usize, margin: f64) -> Vec<f64> {
    // Symmetric grid on (−π/4, π/4) avoiding 0 and the corners.
    let quarter = std::f64::consts::FRAC_PI_4;
    let half = n / 2;
    let mut grid = Vec::with_capacity(2 * half);
    for k in 0..half {
        let phi = margin + (quarter - 2.0 * margin) * (k as f64 + 0.5) / half as f64;
        grid.push(-phi);
        grid.push(phi);
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap());
    grid
}

fn asym_for(
    md: &MonodromyData,
    phi: f64,
    n: i64,
) -> Result<monodromy::AsymptoticSolution> {
    let red = boutroux::reduce_phi(phi - n as f64 * std::f64::consts::FRAC_PI_2)
        + n as f64 * std::f64::consts::FRAC_PI_2;
    let phi_solve = boutroux::reduce_phi(phi);
    let pt = boutroux::solve_a(
        phi_solve,
        boutroux::seed_scan(phi_solve, 24),
        &SolveOptions::default(),
    )?;
    let asym = monodromy::phase_shift(md, red, n, &pt.periods_z(), pt.a).map_err(|e| match e {
        p4ell::Error::NonGenericData(msg) => invalid(format!("non-generic Stokes data: {msg}")),
        other => anyhow!(other),
    })?;
    Ok(asym)
}

// ---------------------------------------------------------------- trajectory

#[derive(Args)]
pub struct TrajectoryArgs {
    /// Number of grid points on (−π/4, π/4).
    #[arg(long)]
    points: Option<usize>,
    /// Margin kept from the degenerate directions kπ/4.
    #[arg(long)]
    margin: Option<f64>,
    /// Output CSV path.
    #[arg(long, default_value = "trajectory.csv")]
    csv: PathBuf,
    /// Output JSON path.
    #[arg(long, default_value = "trajectory.json")]
    json: PathBuf,
    /// Print max |A_{−φ} − conj A_φ| over the grid.
    #[arg(long)]
    check_symmetry: bool,
    /// Also write an SVG of the trajectory loop.
    #[arg(long)]
    figure: Option<PathBuf>,
}

pub fn trajectory(a: TrajectoryArgs, cfg: &Config) -> Result<()> {
    let n = a.points.or(cfg.usize("trajectory.points")).unwrap_or(50);
    let margin = a.margin.or(cfg.f64("trajectory.margin")).unwrap_or(8e-3);
    if margin <= boutroux::PHI_MARGIN {
        return Err(invalid(format!(
            "margin must exceed the solver margin {}",
            boutroux::PHI_MARGIN
        )));
    }
    let grid = default_grid(n, margin);
    let pts = boutroux::trajectory(&grid, &SolveOptions::default())?;
    let mut csv = Csv::new(&[
        "phi",
        "ReA",
        "ImA",
        "ReOmega_a",
        "ImOmega_a",
        "ReOmega_b",
        "ImOmega_b",
        "residual_a",
        "residual_b",
        "newton_iters",
    ]);
    for p in &pts {
        csv.row(&[
            fmt_f(p.phi),
            fmt_f(p.a.re),
            fmt_f(p.a.im),
            fmt_f(p.periods.omega_a.re),
            fmt_f(p.periods.omega_a.im),
            fmt_f(p.periods.omega_b.re),
            fmt_f(p.periods.omega_b.im),
            fmt_f(p.residual.0),
            fmt_f(p.residual.1),
            p.newton_iters.to_string(),
        ]);
    }
    if a.check_symmetry {
        let max_asym = max_conjugate_asymmetry(&pts);
        println!("max |A(-phi) - conj A(phi)| = {}", fmt_f(max_asym));
    }
    let json = serde_json::json!({
        "points": pts.iter().map(|p| serde_json::json!({
            "phi": p.phi,
            "a": json_c(p.a),
            "omega_a": json_c(p.periods.omega_a),
            "omega_b": json_c(p.periods.omega_b),
            "tau": json_c(p.periods.tau),
            "residual": [p.residual.0, p.residual.1],
            "newton_iters": p.newton_iters,
        })).collect::<Vec<_>>(),
    });
    if let Some(fig) = &a.figure {
        write_text(fig, &trajectory_svg(&pts))?;
    }
    csv.write(&a.csv)?;
    write_json(&a.json, &json)?;
    println!("trajectory: {} points -> {}, {}", pts.len(), a.csv.display(), a.json.display());
    Ok(())
}

fn max_conjugate_asymmetry(pts: &[BoutrouxPoint]) -> f64 {
    let mut worst = 0.0f64;
    for p in pts {
        if let Some(q) = pts
            .iter()
            .find(|q| (q.phi + p.phi).abs() < 1e-12)
        {
            worst = worst.max((q.a - p.a.conj()).norm());
        }
    }
    worst
}

fn trajectory_svg(pts: &[BoutrouxPoint]) -> String {
    let (w, h) = (640.0, 480.0);
    let xs: Vec<f64> = pts.iter().map(|p| p.a.re).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.a.im).collect();
    let (x0, x1) = (0.0f64.min(fmin(&xs)) - 0.02, fmax(&xs).max(8.0 / 27.0) + 0.02);
    let (y0, y1) = (fmin(&ys) - 0.02, fmax(&ys) + 0.02);
    let px = |x: f64, y: f64| {
        (
            (x - x0) / (x1 - x0) * (w - 40.0) + 20.0,
            h - 20.0 - (y - y0) / (y1 - y0) * (h - 40.0),
        )
    };
    let mut sorted: Vec<&BoutrouxPoint> = pts.iter().collect();
    sorted.sort_by(|a, b| a.phi.partial_cmp(&b.phi).unwrap());
    let path: Vec<String> = sorted
        .iter()
        .map(|p| {
            let (x, y) = px(p.a.re, p.a.im);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    let ((ex0, ey0), (ex1, ey1)) = (px(8.0 / 27.0, 0.0), px(0.0, 0.0));
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <polyline points=\"{}\" fill=\"none\" stroke=\"#1f4e8c\" stroke-width=\"1.5\"/>\n\
         <circle cx=\"{ex0:.2}\" cy=\"{ey0:.2}\" r=\"4\" fill=\"#c0392b\"/>\n\
         <circle cx=\"{ex1:.2}\" cy=\"{ey1:.2}\" r=\"4\" fill=\"#c0392b\"/>\n\
         </svg>\n",
        path.join(" ")
    )
}

fn fmin(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}
fn fmax(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

// ------------------------------------------------------------------- periods

#[derive(Args)]
pub struct PeriodsArgs {
    /// Direction φ (radians); A defaults to the Boutroux solution A_φ.
    #[arg(long, allow_negative_numbers = true)]
    phi: f64,
    /// Modulus A as `re` or `re,im` (overrides the trajectory value).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Work in the ζ-frame instead of the z-frame.
    #[arg(long)]
    zeta_frame: bool,
    #[arg(long, default_value = "periods.json")]
    json: PathBuf,
}

pub fn periods_cmd(a: PeriodsArgs, _cfg: &Config) -> Result<()> {
    let modulus = match &a.a {
        Some(s) => parse_c(s).map_err(|e| invalid(e.to_string()))?,
        None => {
            let red = boutroux::reduce_phi(a.phi);
            boutroux::solve_a(red, boutroux::seed_scan(red, 24), &SolveOptions::default())?.a
        }
    };
    let spec = if a.zeta_frame {
        CurveSpec::zeta(modulus)
    } else {
        CurveSpec::new(a.phi, modulus)
    };
    let p = curve_periods(&spec)?;
    let legendre = p.legendre_residual(if a.zeta_frame { 0.0 } else { a.phi });
    let json = serde_json::json!({
        "phi": a.phi,
        "a": json_c(modulus),
        "frame": if a.zeta_frame { "zeta" } else { "z" },
        "omega_a": json_c(p.omega_a),
        "omega_b": json_c(p.omega_b),
        "tau": json_c(p.tau),
        "j_a": json_c(p.j_a),
        "j_b": json_c(p.j_b),
        "legendre_residual": legendre,
        "branch_points": {
            "z1": json_c(spec.z1), "z3": json_c(spec.z3), "z5": json_c(spec.z5),
        },
    });
    write_json(&a.json, &json)?;
    println!("periods -> {}", a.json.display());
    Ok(())
}

pub use periods_cmd as periods;


// -------------------------------------------------------------------- stokes

#[derive(Args)]
pub struct StokesArgs {
    #[arg(long, allow_negative_numbers = true)]
    phi: f64,
    /// Modulus A (defaults to A_φ from the trajectory solve).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    #[arg(long, default_value = "stokes.svg")]
    svg: PathBuf,
    #[arg(long, default_value = "stokes.json")]
    json: PathBuf,
    /// SVG canvas size in pixels.
    #[arg(long, default_value_t = 640)]
    size: u32,
    /// Half-width of the viewport in the λ-plane.
    #[arg(long, default_value_t = 3.0)]
    view: f64,
}

pub fn stokes(a: StokesArgs, _cfg: &Config) -> Result<()> {
    let opts = wkb::TraceOptions::default();
    let graph = match &a.a {
        Some(s) => {
            let modulus = parse_c(s).map_err(|e| invalid(e.to_string()))?;
            wkb::stokes_graph(a.phi, modulus, &opts)?
        }
        None => wkb::stokes_graph_on_trajectory(a.phi, &opts)?,
    };
    let topo = graph.topology();
    let json = serde_json::json!({
        "phi": graph.phi,
        "a": json_c(graph.a),
        "turning_points": graph.turning_points.iter().map(|&z| json_c(z)).collect::<Vec<_>>(),
        "connections": topo.connections,
        "rays": topo.rays,
        "curves": graph.curves.iter().map(|c| serde_json::json!({
            "from": c.from,
            "end": format!("{:?}", c.end),
            "points": c.points.len(),
        })).collect::<Vec<_>>(),
    });
    write_text(&a.svg, &graph.to_svg(a.size, a.size, a.view))?;
    write_json(&a.json, &json)?;
    println!(
        "stokes graph: {} curves, {} connections -> {}, {}",
        graph.curves.len(),
        topo.connections.len(),
        a.svg.display(),
        a.json.display()
    );
    Ok(())
}

// --------------------------------------------------------------- phase-shift

#[derive(Args)]
pub struct PhaseShiftArgs {
    #[arg(long, allow_negative_numbers = true)]
    phi: f64,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    beta: String,
    /// Stokes coefficients `s1;s2;s3[;s4]`, each `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    /// Sector index n (φ − nπ/2 ∈ (−π/4, π/4)).
    #[arg(long, default_value_t = 0)]
    sector: i64,
    #[arg(long, default_value = "phase_shift.json")]
    json: PathBuf,
}

pub fn phase_shift(a: PhaseShiftArgs, _cfg: &Config) -> Result<()> {
    let alpha = parse_c(&a.alpha).map_err(|e| invalid(e.to_string()))?;
    let beta = parse_c(&a.beta).map_err(|e| invalid(e.to_string()))?;
    let md = monodromy_from(alpha, beta, &a.s)?;
    let asym = asym_for(&md, a.phi, a.sector)?;
    let json = serde_json::json!({
        "phi": asym.phi,
        "sector": asym.n,
        "a_phi": json_c(asym.a_phi),
        "chi": json_c(asym.chi),
        "branch_l": json_c(asym.branch_l),
        "gamma_ab": json_c(asym.gamma_ab),
        "c_p": json_c(asym.c_p),
        "omega_a": json_c(asym.periods.omega_a),
        "omega_b": json_c(asym.periods.omega_b),
        "tau": json_c(asym.periods.tau),
        "s": asym.monodromy.s.iter().map(|&z| json_c(z)).collect::<Vec<_>>(),
    });
    write_json(&a.json, &json)?;
    println!("phase shift chi = {} + {}i -> {}", asym.chi.re, asym.chi.im, a.json.display());
    Ok(())
}

// ------------------------------------------------------------------ evaluate

#[derive(Args)]
pub struct EvaluateArgs {
    #[arg(long, allow_negative_numbers = true)]
    phi: f64,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    beta: String,
    /// Stokes coefficients `s1;s2;s3[;s4]`, each `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    #[arg(long, default_value_t = 50.0)]
    t_min: f64,
    #[arg(long, default_value_t = 200.0)]
    t_max: f64,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value = "evaluate.csv")]
    csv: PathBuf,
}

pub fn evaluate(a: EvaluateArgs, cfg: &Config) -> Result<()> {
    let alpha = parse_c(&a.alpha).map_err(|e| invalid(e.to_string()))?;
    let beta = parse_c(&a.beta).map_err(|e| invalid(e.to_string()))?;
    let md = monodromy_from(alpha, beta, &a.s)?;
    let asym = asym_for(&md, a.phi, 0)?;
    let samples = a.samples.or(cfg.usize("evaluate.samples")).unwrap_or(400);
    if a.t_max <= a.t_min || samples < 2 {
        return Err(invalid("need t_max > t_min and at least 2 samples"));
    }
    let mut csv = Csv::new(&["t", "re_x", "im_x", "re_y", "im_y", "pole"]);
    let rot = num_complex::Complex64::from_polar(1.0, asym.phi_reduced());
    let mut finite = 0usize;
    for k in 0..samples {
        let t = a.t_min + (a.t_max - a.t_min) * k as f64 / (samples - 1) as f64;
        let tc = C::new(t, 0.0);
        let x = rot * (tc * 2.0).sqrt();
        match asym.y_at(x) {
            Ok(y) => {
                finite += 1;
                csv.row(&[
                    fmt_f(t),
                    fmt_f(x.re),
                    fmt_f(x.im),
                    fmt_f(y.re),
                    fmt_f(y.im),
                    "0".into(),
                ]);
            }
            Err(p4ell::Error::PoleProximity { .. }) => {
                csv.row(&[fmt_f(t), fmt_f(x.re), fmt_f(x.im), String::new(), String::new(), "1".into()]);
            }
            Err(e) => return Err(e.into()),
        }
    }
    csv.write(&a.csv)?;
    println!("evaluate: {finite}/{samples} finite samples -> {}", a.csv.display());
    Ok(())
}

// -------------------------------------------------------------------- verify

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long, allow_negative_numbers = true)]
    phi: f64,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    alpha: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    beta: String,
    /// Stokes coefficients `s1;s2;s3[;s4]`, each `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true)]
    s: String,
    #[arg(long, default_value_t = 100.0)]
    t_min: f64,
    #[arg(long, default_value_t = 400.0)]
    t_max: f64,
    #[arg(long)]
    segments: Option<usize>,
    /// Imaginary part of the scan line in t.
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    im_t: f64,
    /// Radius of the removed pole disks.
    #[arg(long, default_value_t = 0.15)]
    delta0: f64,
    #[arg(long, default_value = "residuals.csv")]
    csv: PathBuf,
}

pub fn verify(a: VerifyArgs, cfg: &Config) -> Result<()> {
    let alpha = parse_c(&a.alpha).map_err(|e| invalid(e.to_string()))?;
    let beta = parse_c(&a.beta).map_err(|e| invalid(e.to_string()))?;
    let md = monodromy_from(alpha, beta, &a.s)?;
    let asym = asym_for(&md, a.phi, 0)?;
    let segments = a.segments.or(cfg.usize("verify.segments")).unwrap_or(40);
    let scan = verify::residual_scan(
        &asym,
        a.t_min,
        a.t_max,
        segments,
        a.im_t,
        a.delta0,
        &IntegrateOptions::default(),
    )?;
    let mut csv = Csv::new(&["t", "residual"]);
    for s in &scan.samples {
        csv.row(&[fmt_f(s.t), fmt_f(s.residual)]);
    }
    csv.write(&a.csv)?;
    println!(
        "verify: {} samples, fitted exponent {:.4}, {} segments failed -> {}",
        scan.samples.len(),
        scan.fitted_exponent,
        scan.segments_failed,
        a.csv.display()
    );
    for (t, m) in &scan.binned_medians {
        println!("  bin t~{t:.1}: median residual {m:.3e}");
    }
    Ok(())
}

// ---------------------------------------------------------------- identities

#[derive(Args)]
pub struct IdentitiesArgs {
    /// Direction used for the curve-level identity suites.
    #[arg(long, default_value_t = -0.3, allow_negative_numbers = true)]
    phi: f64,
}

struct Suite {
    name: &'static str,
    pass: bool,
    detail: String,
}

pub fn identities(a: IdentitiesArgs, _cfg: &Config) -> Result<()> {
    let mut suites: Vec<Suite> = Vec::new();
    let phi = a.phi;
    let red = boutroux::reduce_phi(phi);
    let pt = boutroux::solve_a(red, boutroux::seed_scan(red, 24), &SolveOptions::default())?;
    let spec = CurveSpec::new(red, pt.a);
    let p = pt.periods_z();

    // Legendre relation.
    let legendre = p.legendre_residual(red);
    suites.push(Suite {
        name: "legendre",
        pass: legendre < 1e-8,
        detail: format!("residual {legendre:.3e}"),
    });

    // Theta quasi-periodicity and the P-route agreement.
    let theta_suite = (|| -> Result<(bool, String)> {
        let ep = p4ell::elliptic::EllipticP::new(red, pt.a, p.clone())?;
        let u = p.omega_a * 0.31 + p.omega_b * 0.17;
        let route = (ep.eval(u)? - ep.eval_wp_route(u)?).norm();
        let ode = ep.ode_residual(u)?.norm();
        Ok((route < 1e-9 && ode < 1e-8, format!("route diff {route:.3e}, ode residual {ode:.3e}")))
    })();
    match theta_suite {
        Ok((pass, detail)) => suites.push(Suite { name: "theta", pass, detail }),
        Err(e) => suites.push(Suite { name: "theta", pass: false, detail: e.to_string() }),
    }

    // Residues of P at ±Ω_b/3.
    let residue_suite = (|| -> Result<(bool, String)> {
        let ep = p4ell::elliptic::EllipticP::new(red, pt.a, p.clone())?;
        let r = 0.02 * p.omega_a.norm();
        let rp = ep.residue_at(p.omega_b / 3.0, r, 64)?;
        let rm = ep.residue_at(-p.omega_b / 3.0, r, 64)?;
        let ok = (rp - 1.0).norm() < 1e-6 && (rm + 1.0).norm() < 1e-6;
        Ok((ok, format!("res(+) {rp:.8}, res(-) {rm:.8}")))
    })();
    match residue_suite {
        Ok((pass, detail)) => suites.push(Suite { name: "residues", pass, detail }),
        Err(e) => suites.push(Suite { name: "residues", pass: false, detail: e.to_string() }),
    }

    // Γ_{α,β} quadrature cross-check.
    let gamma_suite = (|| -> Result<(bool, String)> {
        let za = p4ell::curve::cycle_integral_collapsed(&spec, CycleKind::CycleA, Integrand::ZOverW)?;
        let zb = p4ell::curve::cycle_integral_collapsed(&spec, CycleKind::CycleB, Integrand::ZOverW)?;
        let delta = C::new(0.25, 0.0);
        let gamma = (p.omega_a * zb - p.omega_b * za) * delta / C::new(0.0, 2.0 * std::f64::consts::PI);
        let closed = p.omega_b * delta * (2.0 / 3.0);
        let diff = (gamma - closed).norm();
        Ok((diff < 1e-7, format!("quadrature vs closed form: {diff:.3e}")))
    })();
    match gamma_suite {
        Ok((pass, detail)) => suites.push(Suite { name: "gamma", pass, detail }),
        Err(e) => suites.push(Suite { name: "gamma", pass: false, detail: e.to_string() }),
    }

    // Third-kind identities (the W-integral family).
    let tk = p4ell::curve::third_kind_identities(&spec, C::new(1.3, 0.6));
    match tk {
        Ok(rep) => {
            let worst = rep.eq67.residual.max(rep.eq68.residual).max(rep.eq69.residual);
            suites.push(Suite {
                name: "w-integrals",
                pass: worst < 1e-7,
                detail: format!(
                    "eq67 {:.2e}, eq68 {:.2e}, eq69 {:.2e}",
                    rep.eq67.residual, rep.eq68.residual, rep.eq69.residual
                ),
            });
        }
        Err(e) => suites.push(Suite { name: "w-integrals", pass: false, detail: e.to_string() }),
    }

    // Monodromy surface algebra.
    let m0_suite = (|| -> Result<(bool, String)> {
        let alpha = C::new(0.3, 0.0);
        let beta = C::new(0.1, 0.0);
        let s4 = monodromy::solve_s4(alpha, beta, C::new(0.8, 0.1), C::new(0.3, -0.2), C::new(0.5, 0.4))?;
        let md = MonodromyData::new(alpha, beta, [C::new(0.8, 0.1), C::new(0.3, -0.2), C::new(0.5, 0.4), s4]);
        let r = monodromy::m0_residual(&md).norm();
        let gauged = monodromy::gauge_action(C::new(1.3, -0.7), &md)?;
        let rg = monodromy::m0_residual(&gauged).norm();
        let sing = monodromy::mstar_singular_point(C::new(0.5, 0.0), beta).is_some()
            && monodromy::mstar_singular_point(C::new(0.3, 0.0), beta).is_none();
        Ok((r < 1e-12 && rg < 1e-12 && sing, format!("residual {r:.2e}, gauged {rg:.2e}, singular-point detection {sing}")))
    })();
    match m0_suite {
        Ok((pass, detail)) => suites.push(Suite { name: "m0", pass, detail }),
        Err(e) => suites.push(Suite { name: "m0", pass: false, detail: e.to_string() }),
    }

    let mut all = true;
    for s in &suites {
        println!("{} {:<12} {}", if s.pass { "PASS" } else { "FAIL" }, s.name, s.detail);
        all &= s.pass;
    }
    if !all {
        bail!("one or more identity suites failed");
    }
    Ok(())
}

// --------------------------------------------------------------- oracle-scan

#[derive(Args)]
pub struct OracleScanArgs {
    #[arg(long, allow_negative_numbers = true)]
    phi: f64,
    #[arg(long, default_value_t = 40)]
    grid: usize,
    #[arg(long, default_value = "oracle.json")]
    json: PathBuf,
}

pub fn oracle_scan(a: OracleScanArgs, _cfg: &Config) -> Result<()> {
    let red = boutroux::reduce_phi(a.phi);
    let (im_lo, im_hi) = if red < 0.0 { (0.0, 0.2) } else { (-0.2, 0.0) };
    let argmin = verify::boutroux_oracle_scan(red, (0.0, 8.0 / 27.0), (im_lo, im_hi), a.grid);
    let (ra, rb) = boutroux::boutroux_residual(red, argmin)?;
    let json = serde_json::json!({
        "phi": a.phi,
        "argmin": json_c(argmin),
        "residual": [ra, rb],
        "grid": a.grid,
    });
    write_json(&a.json, &json)?;
    println!("oracle argmin A = {} + {}i -> {}", argmin.re, argmin.im, a.json.display());
    Ok(())
}
