//! The `gnsgeo` command line.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{error::ErrorKind, CommandFactory, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::algebra::{jordan_product, lie_product, operator_norm, ComplexMatrix, HermitianMatrix};
use crate::biham::{self, DeformedAlgebra};
use crate::dual::{self, FiniteAlgebra, TensorField};
use crate::error::{Error, Result};
use crate::fields;
use crate::gns;
use crate::kahler::{self, Classification, KahlerFunction, RayPoint};
use crate::linalg::{self, CVec};
use crate::poly::Polynomial;
use crate::report::{emit_report, float, floats, RunReport};
use crate::sampling::{self, Rng};
use crate::state::DensityState;

pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "gnsgeo",
    version,
    about = "GNS realizations, dual-space tensors, Kähler geometry of CP^n, and bi-Hamiltonian checks",
    arg_required_else_help = true
)]
struct Cli {
    /// Seed for every random sample
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Replace the default tolerance of every floating-point check
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Where to write the JSON report (stdout otherwise)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Number of random samples
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Where to write per-sample CSV data
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    family: Family,
}

#[derive(Debug, Subcommand)]
enum Family {
    /// GNS construction for a density state
    #[command(subcommand)]
    Gns(GnsCmd),
    /// Tensor fields on the dual of a finite algebra
    #[command(subcommand)]
    Geom(GeomCmd),
    /// Kähler geometry of complex projective space
    #[command(subcommand)]
    Kahler(KahlerCmd),
    /// Standard versus deformed Heisenberg evolution
    #[command(subcommand)]
    Biham(BihamCmd),
}

#[derive(Debug, Subcommand)]
enum GnsCmd {
    /// Build the realization of a state and verify it
    Build {
        #[arg(long)]
        state: PathBuf,
    },
    /// Rebuild a realization written by `gns build` and re-verify it
    Verify {
        #[arg(long)]
        realization: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgebraChoice {
    U2,
    Threedim,
}

#[derive(Debug, Subcommand)]
enum GeomCmd {
    /// Component tables and defect summary
    Tensors {
        #[arg(long, value_enum)]
        algebra: AlgebraChoice,
        /// a1,a2,a3 for the three-dimensional family
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1,1,1")]
        a: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        points: usize,
        /// Report path; takes precedence over --out
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum KahlerCmd {
    /// Laplacian eigenvalues and multiplicities on CP^n
    Spectrum {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        lmax: u32,
    },
    /// Classify the expectation function of an operator
    Test {
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Check f_A ⋆ f_B = f_AB at random rays
    Star {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum BihamCmd {
    /// Evolve A0 under H with both products
    Run {
        #[arg(long = "H")]
        h: PathBuf,
        #[arg(long = "K")]
        k: PathBuf,
        #[arg(long = "A0")]
        a0: PathBuf,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t0: f64,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        t1: f64,
        #[arg(long, default_value_t = 400)]
        steps: usize,
    },
}

struct Opts {
    seed: u64,
    tol: Option<f64>,
    samples: Option<usize>,
    csv: Option<PathBuf>,
}

impl Opts {
    fn tol(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    fn rng(&self) -> Rng {
        sampling::rng(self.seed)
    }
}

/// Parses `argv` (program name first), runs the command, and returns the
/// process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    0
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    eprintln!("{}", Cli::command().render_long_help());
                    EXIT_USAGE
                }
                _ => {
                    eprintln!("{}", e.render());
                    eprintln!("{}", Cli::command().render_long_help());
                    EXIT_USAGE
                }
            };
        }
    };
    let opts = Opts {
        seed: cli.seed,
        tol: cli.tol,
        samples: cli.samples,
        csv: cli.csv.clone(),
    };
    let mut out = cli.out.clone();
    let result = match &cli.family {
        Family::Gns(GnsCmd::Build { state }) => gns_build(state, &opts),
        Family::Gns(GnsCmd::Verify { realization }) => gns_verify(realization, &opts),
        Family::Geom(GeomCmd::Tensors {
            algebra,
            a,
            points,
            report,
        }) => {
            if report.is_some() {
                out = report.clone();
            }
            geom_tensors(*algebra, a, *points, &opts)
        }
        Family::Kahler(KahlerCmd::Spectrum { n, lmax }) => kahler_spectrum(*n, *lmax, &opts),
        Family::Kahler(KahlerCmd::Test { op, n }) => kahler_test(op, *n, &opts),
        Family::Kahler(KahlerCmd::Star { a, b }) => kahler_star(a, b, &opts),
        Family::Biham(BihamCmd::Run {
            h,
            k,
            a0,
            t0,
            t1,
            steps,
        }) => biham_run(h, k, a0, *t0, *t1, *steps, out.as_deref(), &opts),
    };
    match result {
        Ok(report) => finish(&report, out.as_deref()),
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn finish(report: &RunReport, out: Option<&Path>) -> i32 {
    let verdict = report.verdict();
    match out {
        Some(path) => {
            if let Err(e) = emit_report(report, path) {
                eprintln!("error: {e}");
                return 1;
            }
            println!("{}: {}", report.command, verdict.as_str());
        }
        None => print!("{}", report.to_canonical_json()),
    }
    for c in report.checks.iter().filter(|c| !c.pass) {
        eprintln!("check {} failed: defect {:e} > tolerance {:e}", c.name, c.defect, c.tolerance);
    }
    verdict.exit_code()
}

fn read_json(path: &Path) -> Result<(Vec<u8>, Value)> {
    let bytes = fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let value = serde_json::from_slice(&bytes)?;
    Ok((bytes, value))
}

fn write_csv(path: &Path, header: &str, rows: impl Iterator<Item = (String, f64)>) -> Result<()> {
    let mut s = format!("{header}\n");
    for (k, v) in rows {
        s.push_str(&format!("{k},{}\n", crate::report::format_g17(v)));
    }
    fs::write(path, s)?;
    Ok(())
}

fn random_observables(rng: &mut Rng, n: usize, count: usize) -> Vec<ComplexMatrix> {
    (0..count).map(|_| sampling::complex_matrix(rng, n)).collect()
}

fn gns_checks(report: &mut RunReport, state: &DensityState, opts: &Opts) -> Result<()> {
    let g = gns::build_gns(state);
    let irr = gns::irreducibility(&g);
    let parts = gns::decompose_mixed(&g)?;
    let mut rng = opts.rng();
    let samples = random_observables(&mut rng, state.dim(), opts.samples.unwrap_or(100));
    report
        .check("cyclic_vector", gns::verify_cyclic(&g, &samples)?, opts.tol(1e-10))
        .check("representation", g.representation_defect(&samples)?, opts.tol(1e-9))
        .check("intertwiner", g.intertwiner_defect(&samples)?, opts.tol(1e-9))
        .check("quotient_orthonormality", g.orthonormality_defect(), opts.tol(1e-10))
        .check(
            "commutant_dim_equals_rank_squared",
            (irr.commutant_dim as f64 - (g.rank() * g.rank()) as f64).abs(),
            0.0,
        )
        .check("mixed_reconstruction", gns::reconstruction_defect(state, &parts)?, opts.tol(1e-10));
    let weight_gap = parts
        .iter()
        .map(|p| (p.cyclic_weight - p.weight).abs())
        .fold(0.0, f64::max);
    report.check("component_weights", weight_gap, opts.tol(1e-10));
    let weights: Vec<f64> = parts.iter().map(|p| p.weight).collect();
    report
        .insert("algebra_dim", json!(g.algebra_dim()))
        .insert("hilbert_dim", json!(g.hilbert_dim()))
        .insert("ideal_dim", json!(g.ideal_dim()))
        .insert("rank", json!(g.rank()))
        .insert("commutant_dim", json!(irr.commutant_dim))
        .insert("is_irreducible", json!(irr.is_irreducible))
        .insert("weights", floats(&weights))
        .insert("cyclic_norm_before_normalization", float(g.cyclic_norm_before_normalization()))
        .insert("state", state.to_json());
    Ok(())
}

fn gns_build(path: &Path, opts: &Opts) -> Result<RunReport> {
    let (bytes, value) = read_json(path)?;
    let state = DensityState::from_json(&value)?;
    let mut report = RunReport::new("gns build", &[bytes], opts.seed);
    gns_checks(&mut report, &state, opts)?;
    Ok(report)
}

fn gns_verify(path: &Path, opts: &Opts) -> Result<RunReport> {
    let (bytes, value) = read_json(path)?;
    let data = value
        .get("data")
        .ok_or_else(|| Error::Json("realization has no \"data\" object".into()))?;
    let state_json = data
        .get("state")
        .ok_or_else(|| Error::Json("realization has no embedded state".into()))?;
    let state = DensityState::from_json(state_json)?;
    let mut report = RunReport::new("gns verify", &[bytes], opts.seed);
    gns_checks(&mut report, &state, opts)?;
    for key in ["hilbert_dim", "ideal_dim", "commutant_dim"] {
        let recorded = data.get(key).and_then(Value::as_u64);
        let rebuilt = report.data.get(key).and_then(Value::as_u64);
        let gap = match (recorded, rebuilt) {
            (Some(a), Some(b)) => (a as f64 - b as f64).abs(),
            _ => f64::INFINITY,
        };
        report.check(format!("recorded_{key}"), gap, 0.0);
    }
    Ok(report)
}

fn random_points(rng: &mut Rng, dim: usize, count: usize) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| (0..dim).map(|_| sampling::gaussian(rng)).collect())
        .collect()
}

fn constants_table(alg: &FiniteAlgebra) -> Value {
    let d = alg.dim();
    Value::Array(
        (0..d)
            .map(|i| {
                Value::Array(
                    (0..d)
                        .map(|j| floats(&(0..d).map(|k| alg.constant(i, j, k)).collect::<Vec<_>>()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn pair_defect(t: &TensorField, pts: &[Vec<f64>], sign: f64) -> f64 {
    pts.iter()
        .map(|x| {
            let c = t.components(x);
            (&c + c.transpose() * sign).amax()
        })
        .fold(0.0, f64::max)
}

fn bracket_jacobi_defect(t: &TensorField, pts: &[Vec<f64>]) -> Result<f64> {
    let d = t.dim();
    let alg = t.algebra();
    let coord = |i: usize| Polynomial::coordinate(d, i);
    // {x_j, x_k} as a linear polynomial
    let inner = |j: usize, k: usize| {
        Polynomial::linear(&(0..d).map(|m| alg.constant(j, k, m)).collect::<Vec<_>>())
    };
    let mut worst = 0.0_f64;
    for x in pts {
        let p = dual::DualPoint::new(x.clone())?;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let s = dual::poisson_bracket(t, &coord(i)?, &inner(j, k), &p)?
                        + dual::poisson_bracket(t, &coord(j)?, &inner(k, i), &p)?
                        + dual::poisson_bracket(t, &coord(k)?, &inner(i, j), &p)?;
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    Ok(worst)
}

fn leibniz_worst(t: &TensorField, pts: &[Vec<f64>], rng: &mut Rng) -> Result<f64> {
    let d = t.dim();
    let x0 = Polynomial::coordinate(d, 0)?;
    let f = x0.mul(&x0)?;
    let g = Polynomial::coordinate(d, 1)?;
    let mut worst = 0.0_f64;
    for x in pts {
        let v: Vec<f64> = (0..d).map(|_| sampling::gaussian(rng)).collect();
        let p = dual::DualPoint::new(x.clone())?;
        worst = worst.max(dual::leibniz_defect(t, &v, &f, &g, &p)?);
    }
    Ok(worst)
}

fn geom_tensors(choice: AlgebraChoice, a: &[f64], points: usize, opts: &Opts) -> Result<RunReport> {
    let mut rng = opts.rng();
    let points = points.max(1);
    match choice {
        AlgebraChoice::U2 => {
            let mut report = RunReport::new("geom tensors u2", &[b"u2".to_vec()], opts.seed);
            let (lam, r) = dual::u2_tensors();
            let pts = random_points(&mut rng, 4, points);
            let h0 = pts
                .iter()
                .map(|x| {
                    dual::hamiltonian_flow(&lam, 0)(x)
                        .iter()
                        .fold(0.0_f64, |m, c| m.max(c.abs()))
                })
                .fold(0.0, f64::max);
            let mut lie_r = 0.0_f64;
            let mut lie_l = 0.0_f64;
            let mut grad_r = f64::INFINITY;
            for x in &pts {
                for k in 1..4 {
                    let h = dual::hamiltonian_flow(&lam, k);
                    lie_r = lie_r.max(fields::lie_derivative_bivector(&h, &dual::tensor_map(&r), x).amax());
                    lie_l = lie_l.max(fields::lie_derivative_bivector(&h, &dual::tensor_map(&lam), x).amax());
                    let g = dual::gradient_flow(&r, k);
                    let scale = x.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
                    let lx = fields::lie_derivative_bivector(&g, &dual::tensor_map(&r), x).amax();
                    grad_r = grad_r.min(lx / scale.max(f64::MIN_POSITIVE));
                }
            }
            let hs: Vec<_> = (1..4).map(|k| dual::hamiltonian_flow(&lam, k)).collect();
            let xs: Vec<_> = (1..4).map(|k| dual::gradient_flow(&r, k)).collect();
            let mut family: Vec<dual::VectorField> = Vec::new();
            for f in hs.iter() {
                family.push(f);
            }
            for f in xs.iter() {
                family.push(f);
            }
            let fit = dual::closure_fit(&family, &pts[..pts.len().min(6)])?;
            report
                .check("hamiltonian_h0_zero", h0, 0.0)
                .check("poisson_antisymmetry", pair_defect(&lam, &pts, 1.0), opts.tol(1e-14))
                .check("riemann_symmetry", pair_defect(&r, &pts, -1.0), opts.tol(1e-14))
                .check("poisson_jacobi", bracket_jacobi_defect(&lam, &pts)?, opts.tol(1e-10))
                .check("poisson_leibniz", leibniz_worst(&lam, &pts, &mut rng)?, opts.tol(1e-10))
                .check("riemann_leibniz", leibniz_worst(&r, &pts, &mut rng)?, opts.tol(1e-10))
                .check("lie_derivative_riemann_along_h", lie_r, opts.tol(1e-8))
                .check("lie_derivative_poisson_along_h", lie_l, opts.tol(1e-8))
                .check("six_field_closure", fit.residual, opts.tol(1e-8));
            let (pos, neg, zero) = fit.killing_signature;
            report
                .insert("labels", json!(lam.algebra().labels()))
                .insert("poisson_constants", constants_table(lam.algebra()))
                .insert("riemann_constants", constants_table(r.algebra()))
                .insert("pauli_identity_discrepancy", float(dual::pauli_identity_discrepancy()))
                .insert("killing_signature", json!([pos, neg, zero]))
                .insert("min_relative_lie_derivative_riemann_along_x", float(grad_r))
                .insert("points", json!(points));
            Ok(report)
        }
        AlgebraChoice::Threedim => {
            let a: [f64; 3] = a
                .try_into()
                .map_err(|_| Error::DimensionMismatch { expected: 3, found: a.len() })?;
            let input = format!("threedim:{}", a.map(crate::report::format_g17).join(","));
            let mut report = RunReport::new("geom tensors threedim", &[input.into_bytes()], opts.seed);
            let t = TensorField::new(FiniteAlgebra::three_dimensional(a)?);
            let pts = random_points(&mut rng, 3, points);
            let c = dual::casimir(a);
            let mut cas = 0.0_f64;
            for x in &pts {
                let p = dual::DualPoint::new(x.clone())?;
                for k in 0..3 {
                    cas = cas.max(dual::poisson_bracket(&t, &c, &Polynomial::coordinate(3, k)?, &p)?.abs());
                }
            }
            let start = &pts[0];
            let drift = dual::casimir_drift(a, 2, start, 0.01, 100)?;
            report
                .check("poisson_antisymmetry", pair_defect(&t, &pts, 1.0), opts.tol(1e-14))
                .check("structure_jacobi", t.algebra().jacobi_defect(), opts.tol(1e-12))
                .check("poisson_jacobi", bracket_jacobi_defect(&t, &pts)?, opts.tol(1e-10))
                .check("casimir_annihilation", cas, opts.tol(1e-12))
                .check("poisson_leibniz", leibniz_worst(&t, &pts, &mut rng)?, opts.tol(1e-10))
                .check("casimir_drift_along_h3", drift, opts.tol(1e-8));
            report
                .insert("a", floats(&a))
                .insert("labels", json!(t.algebra().labels()))
                .insert("poisson_constants", constants_table(t.algebra()))
                .insert("points", json!(points));
            Ok(report)
        }
    }
}

fn big_to_json(x: &BigUint) -> Value {
    u64::try_from(x).map(Value::from).unwrap_or_else(|_| Value::String(x.to_string()))
}

fn binomial(n: u32, k: u32) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn kahler_spectrum(n: u32, lmax: u32, opts: &Opts) -> Result<RunReport> {
    let table = kahler::laplacian_spectrum(n, lmax)?;
    let mut report = RunReport::new("kahler spectrum", &[format!("{n},{lmax}").into_bytes()], opts.seed);
    let mut cross = 0.0;
    for e in &table {
        // dimension of bidegree-(l,l) harmonic polynomials
        let other = if e.l == 0 {
            BigUint::from(1u32)
        } else {
            let a = binomial(n + e.l, e.l);
            let b = binomial(n + e.l - 1, e.l - 1);
            &a * &a - &b * &b
        };
        if other != e.multiplicity {
            cross += 1.0;
        }
    }
    report.check("multiplicity_cross_check", cross, 0.0);
    if let Some(first) = table.get(1) {
        let want = BigUint::from((n + 1) * (n + 1) - 1);
        report.check("first_multiplicity", if first.multiplicity == want { 0.0 } else { 1.0 }, 0.0);
    }
    if n == 1 {
        let bad = table
            .iter()
            .filter(|e| e.multiplicity != BigUint::from(2 * e.l + 1))
            .count();
        report.check("sphere_multiplicities", bad as f64, 0.0);
    }
    let rows: Vec<Value> = table
        .iter()
        .map(|e| {
            json!({
                "n": e.n,
                "l": e.l,
                "eigenvalue": e.eigenvalue,
                "multiplicity": big_to_json(&e.multiplicity),
            })
        })
        .collect();
    report.insert("table", Value::Array(rows));
    Ok(report)
}

fn load_matrix(path: &Path) -> Result<(Vec<u8>, ComplexMatrix)> {
    let (bytes, v) = read_json(path)?;
    Ok((bytes, ComplexMatrix::from_json(&v)?))
}

fn kahler_test(op: &Path, n: Option<usize>, opts: &Opts) -> Result<RunReport> {
    let (bytes, m) = load_matrix(op)?;
    let dim = m.dim();
    if dim < 2 {
        return Err(Error::Invalid("operator must act on at least ℂ²".into()));
    }
    if let Some(n) = n {
        if n + 1 != dim {
            return Err(Error::DimensionMismatch { expected: n + 1, found: dim });
        }
    }
    let mut rng = opts.rng();
    let f = KahlerFunction::Expectation(m);
    let r = kahler::kahler_test(&f, dim - 1, opts.samples.unwrap_or(kahler::MIN_SAMPLES), &mut rng)?;
    let mut report = RunReport::new("kahler test", &[bytes], opts.seed);
    let best = r.harmonic_defect.min(r.eigen_defect);
    match r.classification {
        Classification::Inconclusive => {
            report.inconclusive = true;
            report.check("kahlerian", best, kahler::REJECT_TOLERANCE);
        }
        _ => {
            report.check("kahlerian", best, kahler::CLASSIFY_TOLERANCE);
        }
    }
    report
        .insert("n", json!(r.n))
        .insert("classification", json!(r.classification.as_str()))
        .insert("harmonic_defect", float(r.harmonic_defect))
        .insert("eigen_defect", float(r.eigen_defect))
        .insert("measured_eigenvalue", float(r.measured_eigenvalue))
        .insert("first_eigenvalue", json!(-((r.n + 1) as i64)))
        .insert("sup_norm", float(r.sup_norm))
        .insert(
            "sample_defects",
            floats(&r.samples.iter().map(|s| s.1).collect::<Vec<_>>()),
        );
    if let Some(path) = &opts.csv {
        write_csv(
            path,
            "sample,defect",
            r.samples.iter().enumerate().map(|(i, s)| (i.to_string(), s.1)),
        )?;
    }
    Ok(report)
}

fn kahler_star(a_path: &Path, b_path: &Path, opts: &Opts) -> Result<RunReport> {
    let (ab, a) = load_matrix(a_path)?;
    let (bb, b) = load_matrix(b_path)?;
    let a = HermitianMatrix::new(a)?;
    let b = HermitianMatrix::new(b)?;
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let m = a.dim();
    if m < 2 {
        return Err(Error::Invalid("operators must act on at least ℂ²".into()));
    }
    let (ac, bc) = (a.as_complex(), b.as_complex());
    let scale = 1.0_f64.max(operator_norm(ac) * operator_norm(bc));
    let fa = KahlerFunction::Expectation(ac.clone());
    let fb = KahlerFunction::Expectation(bc.clone());
    let jor = jordan_product(ac, bc)?;
    let lie = lie_product(ac, bc)?;
    let mut rng = opts.rng();
    let count = opts.samples.unwrap_or(200).max(1);
    let (mut star_d, mut sym_d, mut pb_d, mut proj_d) = (Vec::new(), 0.0_f64, 0.0_f64, 0.0_f64);
    for _ in 0..count {
        let p = RayPoint::new(&sampling::random_ray(&mut rng, m))?;
        let psi = p.representative();
        let s = kahler::star_product(ac, bc, &p)?;
        star_d.push(s.defect / scale);
        let ba = kahler::star(psi, &fb, &fa)?;
        let sym = (s.value + ba) * 0.5;
        sym_d = sym_d.max((sym - kahler::expectation(&jor, psi)?).norm() / scale);
        let pb = kahler::poisson_bracket(psi, &fa, &fb)?;
        pb_d = pb_d.max((pb - kahler::expectation(&lie, psi)?).norm() / scale);
        let lambda = Complex64::from_polar(
            sampling::uniform(&mut rng, 0.1, 10.0),
            sampling::uniform(&mut rng, 0.0, std::f64::consts::TAU),
        );
        let scaled: CVec = psi.map(|z| z * lambda);
        let (g0, l0) = kahler::projectable_tensors(psi, &fa, &fb)?;
        let (g1, l1) = kahler::projectable_tensors(&scaled, &fa, &fb)?;
        proj_d = proj_d.max(((g1 - g0).norm()).max((l1 - l0).norm()) / scale);
    }
    let worst = star_d.iter().copied().fold(0.0, f64::max);
    let mut report = RunReport::new("kahler star", &[ab, bb], opts.seed);
    report
        .check("star_product", worst, opts.tol(1e-8))
        .check("symmetric_part", sym_d, opts.tol(1e-8))
        .check("poisson_bracket", pb_d, opts.tol(1e-8))
        .check("projectability", proj_d, opts.tol(1e-10));
    report
        .insert("n", json!(m - 1))
        .insert("samples", json!(count))
        .insert("sample_defects", floats(&star_d));
    if let Some(path) = &opts.csv {
        write_csv(
            path,
            "sample,defect",
            star_d.iter().enumerate().map(|(i, d)| (i.to_string(), *d)),
        )?;
    }
    Ok(report)
}

fn spectrum_of(a: &ComplexMatrix) -> Vec<f64> {
    if a.is_hermitian() {
        HermitianMatrix::hermitian_part(a).eigen().0
    } else {
        linalg::singular_values(a.as_matrix())
    }
}

#[allow(clippy::too_many_arguments)]
fn biham_run(
    h_path: &Path,
    k_path: &Path,
    a0_path: &Path,
    t0: f64,
    t1: f64,
    steps: usize,
    out: Option<&Path>,
    opts: &Opts,
) -> Result<RunReport> {
    let (hb, h) = load_matrix(h_path)?;
    let (kb, k) = load_matrix(k_path)?;
    let (ab, a0) = load_matrix(a0_path)?;
    let h = HermitianMatrix::new(h)?;
    let k = DeformedAlgebra::new(HermitianMatrix::new(k)?)?;
    let mut report = RunReport::new("biham run", &[hb, kb, ab], opts.seed);
    report
        .insert("t0", float(t0))
        .insert("t1", float(t1))
        .insert("steps", json!(steps));
    let hk = match biham::deformed_hamiltonian(&k, &h) {
        Ok(hk) => hk,
        Err(Error::NonCommuting { defect, tolerance }) => {
            report.check("commutation", defect, tolerance);
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let comm = biham::commutator(h.as_complex(), k.k().as_complex())?;
    report.check(
        "commutation",
        operator_norm(&comm),
        biham::COMMUTATION_GATE * operator_norm(h.as_complex()) * operator_norm(k.k().as_complex()),
    );
    let mut rng = opts.rng();
    let mut bracket = 0.0_f64;
    let mut involution = 0.0_f64;
    for _ in 0..opts.samples.unwrap_or(100) {
        let a = sampling::complex_matrix(&mut rng, h.dim());
        bracket = bracket.max(biham::bracket_identity_defect(&k, &h, &hk, &a)?);
        let b = sampling::complex_matrix(&mut rng, h.dim());
        involution = involution.max(biham::involution_defect(&k, &a, &b)?);
    }
    let run = biham::evolve_pair(&k, &h, &a0, t0, t1, steps)?;
    let s0 = spectrum_of(&a0);
    let mut drift = 0.0_f64;
    for a in &run.trajectory_std {
        for (x, y) in spectrum_of(a).iter().zip(&s0) {
            drift = drift.max((x - y).abs());
        }
    }
    report
        .check("bracket_identity", bracket, opts.tol(1e-10))
        .check("trajectory_divergence", run.max_divergence(), opts.tol(1e-8))
        .check("spectrum_invariance", drift, opts.tol(1e-9));
    report
        .insert("t_grid", floats(&run.t_grid))
        .insert("divergence", floats(&run.divergence))
        .insert("richardson_estimate", float(run.richardson_estimate))
        .insert("deformed_hermiticity_defect", float(run.deformed_hermiticity_defect))
        .insert("adjoint_involution_defect", float(involution))
        .insert(
            "trajectory_std",
            Value::Array(run.trajectory_std.iter().map(ComplexMatrix::to_json).collect()),
        )
        .insert(
            "trajectory_def",
            Value::Array(run.trajectory_def.iter().map(ComplexMatrix::to_json).collect()),
        );
    let csv = opts
        .csv
        .clone()
        .or_else(|| out.map(|p| p.with_extension("csv")));
    if let Some(path) = csv {
        write_csv(
            &path,
            "t,divergence",
            run.t_grid
                .iter()
                .zip(&run.divergence)
                .map(|(t, d)| (crate::report::format_g17(*t), *d)),
        )?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors() {
        assert_eq!(dispatch(["gnsgeo"]), EXIT_USAGE);
        assert_eq!(dispatch(["gnsgeo", "frobnicate"]), EXIT_USAGE);
        assert_eq!(dispatch(["gnsgeo", "kahler", "spectrum", "--n"]), EXIT_USAGE);
    }

    #[test]
    fn spectrum_report() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("s.json");
        let code = dispatch([
            "gnsgeo",
            "kahler",
            "spectrum",
            "--n",
            "1",
            "--lmax",
            "1",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        let row = &v["data"]["table"][1];
        assert_eq!((row["eigenvalue"].as_i64(), row["multiplicity"].as_u64()), (Some(-2), Some(3)));
        assert_eq!(v["verdict"], "pass");
    }

    #[test]
    fn gns_build_pure_qubit() {
        let dir = tempfile::tempdir().unwrap();
        let state = dir.path().join("pure2.json");
        fs::write(&state, DensityState::basis_projector(2, 0).to_json().to_string()).unwrap();
        let out = dir.path().join("r.json");
        let args = ["gnsgeo", "gns", "build", "--state", state.to_str().unwrap(), "--out", out.to_str().unwrap()];
        assert_eq!(dispatch(args), 0);
        let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(v["data"]["hilbert_dim"], 2);
        let verify = ["gnsgeo", "gns", "verify", "--realization", out.to_str().unwrap(), "--samples", "20"];
        assert_eq!(dispatch(verify), 0);
    }
}
