//! Command-line front end: load problem descriptions, run certifications,
//! verifications and counterexample reproductions, emit deterministic JSON
//! (and optional CSV) reports.
//!
//! Exit codes: 0 all checks pass; 1 refused certificate or failed check
//! (with witness); 2 parse or input error.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use conelip::certify::{
    certify_1d, certify_ball, certify_compact, certify_equi, certify_o_lipschitz,
    empirical_lipschitz, empirical_lipschitz_pairs, empirical_lipschitz_section,
    empirical_o_lipschitz, CheckConfig, LipschitzCertificate, OracleSummary, RegionGauge,
};
use conelip::convex::{ConvexMap, Section};
use conelip::cone::PolyCone;
use conelip::error::Error;
use conelip::metrics::{lcs_certify, lp_certify, nonlipschitz_witness, Metric};
use conelip::pathology::{
    build_block_pairs, polynomial_example, polynomial_general, vesely_step1, vesely_step2,
    vesely_step3,
};
use conelip::report::to_json_17;
use conelip::seminorm::SeminormSpec;
use conelip::vector::Vector;
use conelip::verify::{
    cone_rows, convexity_rows, fullness_row, lattice_identity_rows, metric_rows, seminorm_rows,
    CheckRow,
};

#[derive(Parser)]
#[command(
    name = "conelip",
    about = "Cone orders, convex maps, and certified Lipschitz constants",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IoArgs {
    /// Input problem description (JSON).
    #[arg(long)]
    input: Option<String>,
    /// Output path for the JSON report (stdout when omitted).
    #[arg(long)]
    output: Option<String>,
    /// RNG seed; falls back to the CONELIP_SEED environment variable,
    /// then 42.
    #[arg(long)]
    seed: Option<u64>,
    /// Pair count for sampling oracles.
    #[arg(long, default_value_t = 10_000)]
    pairs: usize,
    /// Sample count for sampled precondition checks and invariant suites.
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    /// Relative tolerance for the oracle-domination gate.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Produce a Lipschitz certificate for the problem in --input and
    /// cross-check it against the sampling oracle.
    Certify(IoArgs),
    /// Run the invariant suites applicable to the objects in --input.
    Verify(IoArgs),
    /// Reproduce the counterexample constructions.
    Pathology(PathologyArgs),
    /// Lattice identity residual table.
    LatticeCheck(LatticeArgs),
}

#[derive(Args)]
struct PathologyArgs {
    #[command(flatten)]
    io: IoArgs,
    /// Run the polynomial example.
    #[arg(long)]
    polynomial: bool,
    /// Emit a cube-metric non-Lipschitz witness exceeding this ratio.
    #[arg(long)]
    cube_witness: Option<f64>,
    /// Degree for the polynomial example.
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Arbitrary polynomial coefficients (lowest degree first); overrides
    /// --n when present.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    coeffs: Option<Vec<f64>>,
    /// Run the block-space construction (steps 1-3).
    #[arg(long)]
    vesely: bool,
    /// Block count for the construction.
    #[arg(long, default_value_t = 30)]
    blocks: usize,
    #[arg(long, default_value_t = 6)]
    n_max: usize,
    #[arg(long, default_value_t = 0.5)]
    lambda: f64,
    #[arg(long, default_value_t = 1.25)]
    alpha: f64,
    #[arg(long, default_value_t = 0.01)]
    slab_eps: f64,
    /// Also emit plot data as CSV (columns: series,n,value).
    #[arg(long)]
    csv: Option<String>,
}

#[derive(Args)]
struct LatticeArgs {
    #[command(flatten)]
    io: IoArgs,
    #[arg(long, default_value_t = 8)]
    dim: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Certify(io) => run_certify(&io),
        Command::Verify(io) => run_verify(&io),
        Command::Pathology(args) => run_pathology(&args),
        Command::LatticeCheck(args) => run_lattice_check(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            let (code, label) = match &err {
                Error::Refused { .. } => (ExitCode::from(1), "refused"),
                _ => (ExitCode::from(2), "error"),
            };
            eprintln!("{label}: {err}");
            code
        }
    }
}

fn seed_of(io: &IoArgs) -> u64 {
    io.seed
        .or_else(|| {
            std::env::var("CONELIP_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(42)
}

fn read_input(io: &IoArgs) -> Result<String, Error> {
    let path = io
        .input
        .as_ref()
        .ok_or_else(|| Error::Input("--input is required for this command".into()))?;
    fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {path}: {e}")))
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, Error> {
    serde_json::from_str(text).map_err(|e| {
        Error::Input(format!(
            "parse error at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

fn emit(io: &IoArgs, value: &impl Serialize) -> Result<(), Error> {
    let mut text = to_json_17(value)?;
    text.push('\n');
    match &io.output {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Input(format!("cannot write {path}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct BallSpec {
    center: Vec<f64>,
    #[serde(rename = "R")]
    big_r: f64,
    r: f64,
    #[serde(default)]
    beta: Option<f64>,
    #[serde(default)]
    source_seminorm: Option<SeminormSpec<f64>>,
}

#[derive(Deserialize)]
#[serde(tag = "task", rename_all = "kebab-case")]
enum CertifyTask {
    Ball {
        map: ConvexMap<f64>,
        target_seminorm: SeminormSpec<f64>,
        source_seminorm: SeminormSpec<f64>,
        center: Vec<f64>,
        #[serde(rename = "R")]
        big_r: f64,
        r: f64,
        #[serde(default)]
        beta: Option<f64>,
    },
    #[serde(rename = "scalar-1d")]
    Scalar1d {
        map: ConvexMap<f64>,
        stations: [f64; 4],
    },
    OLipschitz {
        map: ConvexMap<f64>,
        center: Vec<f64>,
        #[serde(rename = "R")]
        big_r: f64,
        r: f64,
        z: Vec<f64>,
    },
    Equi {
        family: Vec<ConvexMap<f64>>,
        target_seminorm: SeminormSpec<f64>,
        source_seminorm: SeminormSpec<f64>,
        center: Vec<f64>,
        #[serde(rename = "R")]
        big_r: f64,
        r: f64,
    },
    Compact {
        map: ConvexMap<f64>,
        target_seminorm: SeminormSpec<f64>,
        cloud: Vec<Vec<f64>>,
        locals: Vec<BallSpec>,
    },
    LpQuasinorm {
        map: ConvexMap<f64>,
        metric: Metric<f64>,
        center: Vec<f64>,
        r: f64,
        #[serde(default)]
        a: Option<f64>,
    },
    LcsGraduated {
        map: ConvexMap<f64>,
        metric: Metric<f64>,
        center: Vec<f64>,
        rho: f64,
        m_index: usize,
        prior: BallSpec,
    },
}

#[derive(Serialize)]
struct CertifyReport {
    certificate: LipschitzCertificate<f64>,
    oracle: OracleSummary<f64>,
    sound: bool,
}

fn run_certify(io: &IoArgs) -> Result<ExitCode, Error> {
    let text = read_input(io)?;
    let task: CertifyTask = parse_json(&text)?;
    let seed = seed_of(io);
    let cfg = CheckConfig {
        samples: io.samples,
        seed,
    };
    let (mut certificate, oracle) = match task {
        CertifyTask::Ball {
            map,
            target_seminorm,
            source_seminorm,
            center,
            big_r,
            r,
            beta,
        } => {
            map.validate()?;
            let x0 = Vector::new(center);
            let cert = certify_ball(
                &map,
                &target_seminorm,
                &source_seminorm,
                &x0,
                big_r,
                r,
                beta,
                &cfg,
            )?;
            let oracle = empirical_lipschitz(
                &map,
                &cert.region,
                &target_seminorm,
                &RegionGauge::seminorm(source_seminorm),
                io.pairs,
                seed,
            )?;
            (cert, oracle)
        }
        CertifyTask::Scalar1d { map, stations } => {
            map.validate()?;
            let section = Section::of_scalar_map(map)?;
            let [a, alpha, beta, b] = stations;
            let cert = certify_1d(&section, a, alpha, beta, b)?;
            let oracle = empirical_lipschitz_section(&section, alpha, beta, io.pairs, seed)?;
            (cert, oracle)
        }
        CertifyTask::OLipschitz {
            map,
            center,
            big_r,
            r,
            z,
        } => {
            map.validate()?;
            let x0 = Vector::new(center);
            let z = Vector::new(z);
            let cert = certify_o_lipschitz(&map, &x0, big_r, r, &z, &cfg)?;
            let (_, oracle) = empirical_o_lipschitz(&map, &cert.region, io.pairs, seed)?;
            (cert, oracle)
        }
        CertifyTask::Equi {
            family,
            target_seminorm,
            source_seminorm,
            center,
            big_r,
            r,
        } => {
            for f in &family {
                f.validate()?;
            }
            let x0 = Vector::new(center);
            let cert = certify_equi(
                &family,
                &target_seminorm,
                &source_seminorm,
                &x0,
                big_r,
                r,
                &cfg,
            )?;
            let mut worst = OracleSummary {
                pairs: 0,
                used: 0,
                skipped_degenerate: 0,
                max_ratio: 0.0,
                seed,
            };
            let per_member = (io.pairs / family.len()).max(100);
            for f in &family {
                let o = empirical_lipschitz(
                    f,
                    &cert.region,
                    &target_seminorm,
                    &RegionGauge::seminorm(source_seminorm.clone()),
                    per_member,
                    seed,
                )?;
                worst.pairs += o.pairs;
                worst.used += o.used;
                worst.skipped_degenerate += o.skipped_degenerate;
                if o.max_ratio > worst.max_ratio {
                    worst.max_ratio = o.max_ratio;
                }
            }
            (cert, worst)
        }
        CertifyTask::Compact {
            map,
            target_seminorm,
            cloud,
            locals,
        } => {
            map.validate()?;
            let cloud: Vec<Vector<f64>> = cloud.into_iter().map(Vector::new).collect();
            let mut local_certs = Vec::with_capacity(locals.len());
            for spec in locals {
                let p = spec.source_seminorm.clone().ok_or_else(|| {
                    Error::Input("compact locals need a source_seminorm".into())
                })?;
                local_certs.push(certify_ball(
                    &map,
                    &target_seminorm,
                    &p,
                    &Vector::new(spec.center),
                    spec.big_r,
                    spec.r,
                    spec.beta,
                    &cfg,
                )?);
            }
            let cert = certify_compact(&map, &cloud, &local_certs)?;
            let denom = cert.region.gauge.clone();
            let oracle = empirical_lipschitz_pairs(&map, &target_seminorm, &denom, &cloud)?;
            (cert, oracle)
        }
        CertifyTask::LpQuasinorm {
            map,
            metric,
            center,
            r,
            a,
        } => {
            map.validate()?;
            let x0 = Vector::new(center);
            let cert = lp_certify(&map, &metric, &x0, r, a, io.samples, seed)?;
            let oracle = empirical_lipschitz(
                &map,
                &cert.region,
                &SeminormSpec::abs(),
                &RegionGauge::metric(metric),
                io.pairs,
                seed,
            )?;
            (cert, oracle)
        }
        CertifyTask::LcsGraduated {
            map,
            metric,
            center,
            rho,
            m_index,
            prior,
        } => {
            map.validate()?;
            let x0 = Vector::new(center);
            let seminorms = match &metric {
                Metric::Graduated { seminorms } => seminorms.clone(),
                _ => {
                    return Err(Error::Input(
                        "lcs-graduated needs a graduated metric".into(),
                    ))
                }
            };
            if m_index == 0 || m_index > seminorms.len() {
                return Err(Error::Input("m_index out of range".into()));
            }
            let p_m = seminorms[m_index - 1].clone();
            let prior_cert = certify_ball(
                &map,
                &SeminormSpec::abs(),
                &p_m,
                &Vector::new(prior.center),
                prior.big_r,
                prior.r,
                prior.beta,
                &cfg,
            )?;
            let cert = lcs_certify(&map, &metric, Some(&prior_cert), &x0, rho, m_index)?;
            let oracle = empirical_lipschitz(
                &map,
                &cert.region,
                &SeminormSpec::abs(),
                &RegionGauge::metric(metric),
                io.pairs,
                seed,
            )?;
            (cert, oracle)
        }
    };
    let sound = oracle.max_ratio <= certificate.constant.sup_value() * (1.0 + io.tolerance);
    certificate.oracle = Some(oracle);
    let report = CertifyReport {
        certificate,
        oracle,
        sound,
    };
    emit(io, &report)?;
    Ok(if sound {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct VerifyDoc {
    #[serde(default)]
    dim: Option<usize>,
    #[serde(default)]
    generators: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    seminorm: Option<SeminormSpec<f64>>,
    #[serde(default)]
    map: Option<ConvexMap<f64>>,
    #[serde(default)]
    metric: Option<Metric<f64>>,
}

#[derive(Serialize)]
struct VerifyReport {
    seed: u64,
    samples: usize,
    rows: Vec<CheckRow<f64>>,
    all_pass: bool,
}

fn run_verify(io: &IoArgs) -> Result<ExitCode, Error> {
    let text = read_input(io)?;
    let doc: VerifyDoc = parse_json(&text)?;
    let seed = seed_of(io);
    let samples = io.samples;
    let mut rows: Vec<CheckRow<f64>> = Vec::new();

    let dim = doc
        .dim
        .or_else(|| doc.generators.as_ref().and_then(|g| g.first().map(Vec::len)))
        .unwrap_or(8);
    rows.extend(lattice_identity_rows(dim, samples, seed)?);

    let cone = match &doc.generators {
        Some(gens) => {
            let cone = PolyCone::new(
                dim,
                gens.iter().map(|g| Vector::new(g.clone())).collect(),
            )?;
            rows.extend(cone_rows(&cone, samples.min(500), seed)?);
            Some(cone)
        }
        None => None,
    };
    if let Some(p) = &doc.seminorm {
        rows.extend(seminorm_rows(p, dim, samples, seed)?);
        if let Some(cone) = &cone {
            rows.push(fullness_row(p, cone, samples, seed)?);
        }
    }
    if let Some(map) = &doc.map {
        map.validate()?;
        rows.extend(convexity_rows(map, samples, seed)?);
    }
    if let Some(metric) = &doc.metric {
        rows.extend(metric_rows(metric, samples, seed)?);
    }

    let all_pass = rows.iter().all(|r| r.pass);
    emit(
        io,
        &VerifyReport {
            seed,
            samples,
            rows,
            all_pass,
        },
    )?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

// ---------------------------------------------------------------------------
// pathology
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct PathologyReport {
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    polynomial: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vesely: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cube_witness: Option<serde_json::Value>,
}

fn run_pathology(args: &PathologyArgs) -> Result<ExitCode, Error> {
    let io = &args.io;
    let run_both = !args.polynomial && !args.vesely && args.cube_witness.is_none();
    let mut csv = String::from("series,n,value\n");
    let mut report = PathologyReport {
        seed: seed_of(io),
        polynomial: None,
        vesely: None,
        cube_witness: None,
    };

    if let Some(m) = args.cube_witness {
        let w = nonlipschitz_witness::<f64>(m)?;
        report.cube_witness =
            Some(serde_json::to_value(&w).map_err(|e| Error::Input(e.to_string()))?);
    }

    if args.polynomial || run_both {
        let value = match &args.coeffs {
            Some(coeffs) => {
                let r = polynomial_general::<f64>(coeffs, 100_000)?;
                serde_json::to_value(&r).map_err(|e| Error::Input(e.to_string()))?
            }
            None => {
                let r = polynomial_example::<f64>(args.n, 100_000)?;
                csv.push_str(&format!("polynomial_ratio,{},{}\n", r.n, conelip::report::format_f64_17(r.ratio)));
                serde_json::to_value(&r).map_err(|e| Error::Input(e.to_string()))?
            }
        };
        report.polynomial = Some(value);
    }

    if args.vesely || run_both {
        let pairs = build_block_pairs::<f64>(args.blocks)?;
        let mut step1 = Vec::new();
        for n in 1..=args.n_max.min(args.blocks) {
            let r = vesely_step1(&pairs, n)?;
            csv.push_str(&format!("norm_z_n,{n},{}\n", conelip::report::format_f64_17(r.norm_z_n)));
            step1.push(r);
        }
        let step2 = vesely_step2(args.lambda, args.alpha, &pairs, args.n_max)?;
        for (n, norm) in step2.norms.iter().enumerate() {
            csv.push_str(&format!("norm_phi_lambda_n,{n},{}\n", conelip::report::format_f64_17(*norm)));
        }
        let x_star = Vector::from_f64s(&[1.0, 0.0]);
        let v = Vector::from_f64s(&[1.0, 0.0]);
        let step3 = vesely_step3(&step2, &pairs, &x_star, &v, args.slab_eps)?;
        let all_ok = step1.iter().all(|r| r.order_ok)
            && step2.disjointness_ok
            && step2.mu_monotone_ok
            && step2.norm_exceeds_index
            && step3.vanishes_left
            && step3.slab_bounded;
        let value = serde_json::json!({
            "step1": step1,
            "step2": {
                "lambda": step2.lambda,
                "alpha": step2.alpha,
                "alpha_lambda_sq": step2.alpha_lambda_sq,
                "disjointness_ok": step2.disjointness_ok,
                "mu_monotone_ok": step2.mu_monotone_ok,
                "mu_margins": step2.mu_margins,
                "norms": step2.norms,
                "norm_exceeds_index": step2.norm_exceeds_index,
                "selected_blocks": step2.selected_blocks,
            },
            "step3": {
                "ray_norms": step3.ray_norms,
                "vanishes_left": step3.vanishes_left,
                "slab_bounded": step3.slab_bounded,
            },
            "all_checks_pass": all_ok,
        });
        if !all_ok {
            report.vesely = Some(value);
            emit(io, &report)?;
            return Ok(ExitCode::from(1));
        }
        report.vesely = Some(value);
    }

    if let Some(path) = &args.csv {
        fs::write(path, csv).map_err(|e| Error::Input(format!("cannot write {path}: {e}")))?;
    }
    emit(io, &report)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// lattice-check
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct LatticeReport {
    seed: u64,
    dim: usize,
    samples: usize,
    rows: Vec<CheckRow<f64>>,
    all_pass: bool,
}

fn run_lattice_check(args: &LatticeArgs) -> Result<ExitCode, Error> {
    let io = &args.io;
    let seed = seed_of(io);
    let rows = lattice_identity_rows(args.dim, io.samples, seed)?;
    let all_pass = rows.iter().all(|r| r.pass);
    emit(
        io,
        &LatticeReport {
            seed,
            dim: args.dim,
            samples: io.samples,
            rows,
            all_pass,
        },
    )?;
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
