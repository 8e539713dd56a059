//! Command bodies. Each returns its output files as bytes so that runs can
//! be written, or compared against a manifest, by the caller.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use incidence_core::algebra::{GaussianRational, QPoly, Rational, REAL4_VARS};
use incidence_core::configurations::{generate as run_generator, GeneratorSpec};
use incidence_core::cr::{iota, ComplexCurve};
use incidence_core::foliation::{
    containment_check, leaf_tangency_check, sampled_containment, Containment, Hypersurface, TangencyRecord,
    TangencyStatus,
};
use incidence_core::incidence::{
    build_matrix, certify_dof_with_cap, evaluate_bounds, exponent_fit, kst_double_count, BoundInput, BoundReport,
    Configuration, DofCertificate, DofStatus, FitReport, GroundField, KstReport, SeriesPoint, CONFIG_SCHEMA,
};
use incidence_core::partition::{
    curve_crossings, partition_stats, polynomial_partition, CrossingStats, PartitionOptions, PartitionResult,
    PartitionStats, SignVector,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult, EXIT_INDETERMINATE, EXIT_OK, EXIT_VIOLATED};
use crate::{
    BoundArgs, CertifyArgs, Cli, Command, CountArgs, Family, FitArgs, FoliateArgs, Format, GenerateArgs, GlobalArgs,
    PartitionArgs,
};

pub const COUNT_SCHEMA: &str = "incidence-count/1";
pub const CERTIFICATE_SCHEMA: &str = "incidence-certificate/1";
pub const PARTITION_SCHEMA: &str = "incidence-partition/1";
pub const FOLIATE_SCHEMA: &str = "incidence-foliate/1";
pub const BOUND_SCHEMA: &str = "incidence-bound/1";
pub const FIT_SCHEMA: &str = "incidence-fit/1";

/// Files read and written by a command, with its exit code.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub inputs: Vec<PathBuf>,
    /// Primary output first.
    pub outputs: Vec<(PathBuf, Vec<u8>)>,
    pub exit_code: i32,
    /// Diagnostics for stderr.
    pub notes: Vec<String>,
}

impl Outcome {
    fn new(inputs: Vec<PathBuf>, out: &Path, bytes: Vec<u8>) -> Self {
        Outcome {
            inputs,
            outputs: vec![(out.to_path_buf(), bytes)],
            exit_code: EXIT_OK,
            notes: Vec::new(),
        }
    }

    fn with_output(mut self, path: &Path, bytes: Vec<u8>) -> CliResult<Self> {
        if self.outputs.iter().any(|(p, _)| p == path) {
            return Err(CliError::Input(format!("output {} given twice", path.display())));
        }
        self.outputs.push((path.to_path_buf(), bytes));
        Ok(self)
    }
}

/// Runs every command except `replay`.
pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Generate(a) => generate(g, a),
        Command::Count(a) => count(g, a),
        Command::Certify(a) => certify(g, a),
        Command::Partition(a) => partition(g, a),
        Command::Foliate(a) => foliate(g, a),
        Command::Bound(a) => bound(g, a),
        Command::Fit(a) => fit(g, a),
        Command::Replay(_) => Err(CliError::Input("replay cannot be nested".into())),
    }
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn load_config(path: &Path) -> CliResult<Configuration> {
    Configuration::from_json(&read_text(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s.into_bytes()
}

fn csv_bytes<R: Serialize>(rows: &[R]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| CliError::Input(format!("csv: {e}")))
}

fn csv_records(header: &[&str], rows: &[Vec<String>]) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| CliError::Input(format!("csv: {e}")))
}

fn need<T: Clone>(v: &Option<T>, flag: &str, family: &str) -> CliResult<T> {
    v.clone()
        .ok_or_else(|| CliError::Input(format!("--family {family} requires --{flag}")))
}

fn spec_from_flags(seed: u64, a: &GenerateArgs) -> CliResult<GeneratorSpec> {
    let family = a.family.expect("clap requires --family or --spec");
    Ok(match family {
        Family::GridLines => GeneratorSpec::GridLines {
            n: need(&a.n, "n", "grid-lines")?,
        },
        Family::UnitCircles => GeneratorSpec::UnitCircles {
            n: need(&a.n, "n", "unit-circles")?,
            seed,
        },
        Family::ComplexProduct => GeneratorSpec::ComplexProduct {
            a: need(&a.a, "a", "complex-product")?,
            b: need(&a.b, "b", "complex-product")?,
            seed,
        },
        Family::Leaf => GeneratorSpec::Leaf {
            g: need(&a.g, "g", "leaf")?,
            count: need(&a.count, "count", "leaf")?,
            samples: a.samples.unwrap_or(10),
            seed,
        },
        Family::Random => GeneratorSpec::Random {
            m: need(&a.m, "m", "random")?,
            n: a.n.unwrap_or(0),
            degree: a.degree.unwrap_or(1),
            ground_field: a.field.map_or(GroundField::R2, GroundField::from),
            seed,
        },
    })
}

fn generate(g: &GlobalArgs, a: &GenerateArgs) -> CliResult<Outcome> {
    if g.format == Format::Csv {
        return Err(CliError::Input("generate writes JSON configurations only".into()));
    }
    let (spec, inputs) = match &a.spec {
        Some(path) => {
            let spec: GeneratorSpec =
                serde_json::from_str(&read_text(path)?).map_err(|e| CliError::json(path, e))?;
            (spec, vec![path.clone()])
        }
        None => (spec_from_flags(g.seed, a)?, Vec::new()),
    };
    let config = run_generator(&spec)?;
    Ok(Outcome::new(inputs, &a.out, config.to_json().into_bytes()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub schema: String,
    pub m: usize,
    pub n: usize,
    #[serde(rename = "I")]
    pub i: usize,
}

fn count(g: &GlobalArgs, a: &CountArgs) -> CliResult<Outcome> {
    let config = load_config(&a.config)?;
    let matrix = build_matrix(&config);
    let report = CountReport {
        schema: COUNT_SCHEMA.into(),
        m: matrix.m,
        n: matrix.n,
        i: matrix.count(),
    };
    let bytes = match g.format {
        Format::Json => json_bytes(&report),
        Format::Csv => csv_records(
            &["m", "n", "I"],
            &[vec![report.m.to_string(), report.n.to_string(), report.i.to_string()]],
        )?,
    };
    let out = Outcome::new(vec![a.config.clone()], &a.out, bytes);
    match &a.matrix {
        Some(path) => out.with_output(path, matrix.to_csv().into_bytes()),
        None => Ok(out),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertifyReport {
    pub schema: String,
    pub m: usize,
    pub n: usize,
    pub certificate: DofCertificate,
    /// Double count, reported for certified configurations.
    pub kst: Option<KstReport>,
}

fn certify(g: &GlobalArgs, a: &CertifyArgs) -> CliResult<Outcome> {
    let config = load_config(&a.config)?;
    let matrix = build_matrix(&config);
    let cert = certify_dof_with_cap(&matrix, a.k, a.s, a.cap)?;
    let kst = (cert.status == DofStatus::Certified).then(|| kst_double_count(&matrix, a.k, a.s));
    let exit_code = match cert.status {
        DofStatus::Certified => EXIT_OK,
        DofStatus::Violated => EXIT_VIOLATED,
        DofStatus::Indeterminate => EXIT_INDETERMINATE,
    };
    let mut notes = Vec::new();
    match cert.status {
        DofStatus::Violated => {
            for w in &cert.witnesses {
                notes.push(format!("violated: {}", serde_json::to_string(w).expect("witness")));
            }
        }
        DofStatus::Indeterminate => notes.push(format!(
            "indeterminate: needs {} subset and {} pair entries, cap {}",
            cert.subset_entries, cert.pair_entries, cert.cap
        )),
        DofStatus::Certified => {}
    }
    let report = CertifyReport {
        schema: CERTIFICATE_SCHEMA.into(),
        m: matrix.m,
        n: matrix.n,
        certificate: cert,
        kst,
    };
    let bytes = match g.format {
        Format::Json => json_bytes(&report),
        Format::Csv => {
            let c = &report.certificate;
            let status = serde_json::to_value(c.status).expect("status");
            let witness = c
                .witness()
                .map(|w| serde_json::to_string(w).expect("witness"))
                .unwrap_or_default();
            let (lhs, rhs) = report
                .kst
                .as_ref()
                .map(|r| (r.lhs.to_string(), r.rhs.to_string()))
                .unwrap_or_default();
            csv_records(
                &["k", "s", "status", "subset_entries", "pair_entries", "cap", "kst_lhs", "kst_rhs", "witness"],
                &[vec![
                    c.k.to_string(),
                    c.s.to_string(),
                    status.as_str().unwrap_or_default().to_string(),
                    c.subset_entries.to_string(),
                    c.pair_entries.to_string(),
                    c.cap.to_string(),
                    lhs,
                    rhs,
                    witness,
                ]],
            )?
        }
    };
    let mut out = Outcome::new(vec![a.config.clone()], &a.out, bytes);
    out.exit_code = exit_code;
    out.notes = notes;
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    pub schema: String,
    pub m: usize,
    pub dim: usize,
    pub r: u32,
    pub delta: f64,
    pub seed: u64,
    pub max_class: usize,
    /// `(1+δ)^s · m / 2^s` over the completed stages.
    pub class_bound: f64,
    pub within_bound: bool,
    pub classes: usize,
    pub on_surface: usize,
    /// Most sign classes visited by a single curve.
    pub max_curve_classes: usize,
    pub stats: PartitionStats,
    pub crossings: Vec<CrossingStats>,
    pub partition: PartitionResult,
}

fn partition(g: &GlobalArgs, a: &PartitionArgs) -> CliResult<Outcome> {
    let config = load_config(&a.input)?;
    let points = config.lifted_points();
    let opts = PartitionOptions {
        delta: a.delta,
        restarts: a.restarts,
        max_iters: a.max_iters,
        seed: g.seed,
    };
    let result = polynomial_partition(&points, a.r, &opts)?;
    let curves = config.crossing_curves()?;
    let crossings = curves
        .par_iter()
        .map(|c| curve_crossings(c, &result, a.grid))
        .collect::<Result<Vec<_>, _>>()?;
    let stats = partition_stats(&result, &crossings);
    let class_bound = result.class_bound(a.delta);
    let max_class = result.max_class();
    let report = PartitionReport {
        schema: PARTITION_SCHEMA.into(),
        m: points.len(),
        dim: result.dim,
        r: a.r,
        delta: a.delta,
        seed: g.seed,
        max_class,
        class_bound,
        within_bound: max_class as f64 <= class_bound,
        classes: result.occupancy.len(),
        on_surface: result.on_surface,
        max_curve_classes: crossings.iter().map(CrossingStats::classes_visited).max().unwrap_or(0),
        stats,
        crossings,
        partition: result,
    };
    let bytes = match g.format {
        Format::Json => json_bytes(&report),
        Format::Csv => {
            let s = &report.stats;
            let keys: BTreeSet<&SignVector> = s.cell_counts.keys().chain(s.curve_counts.keys()).collect();
            let rows: Vec<Vec<String>> = keys
                .into_iter()
                .map(|k| {
                    vec![
                        k.to_string(),
                        s.cell_counts.get(k).copied().unwrap_or(0).to_string(),
                        s.curve_counts.get(k).copied().unwrap_or(0).to_string(),
                    ]
                })
                .collect();
            csv_records(&["class", "points", "curves"], &rows)?
        }
    };
    let mut out = Outcome::new(vec![a.input.clone()], &a.out, bytes);
    if !report.within_bound {
        out.exit_code = EXIT_VIOLATED;
        out.notes.push(format!(
            "violated: a sign class holds {max_class} points, bound {class_bound:.3}"
        ));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveFoliation {
    pub curve: usize,
    pub containment: Containment,
    pub samples: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    pub all_pass: bool,
    pub frame: Option<(usize, usize)>,
    pub records: Vec<TangencyRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FoliateReport {
    pub schema: String,
    pub hypersurface: QPoly,
    pub all_pass: bool,
    pub curves: Vec<CurveFoliation>,
}

fn resolve_hypersurface(arg: Option<&str>, config: &Configuration) -> CliResult<(QPoly, Vec<PathBuf>)> {
    let Some(arg) = arg else {
        return config
            .hypersurface
            .clone()
            .map(|h| (h, Vec::new()))
            .ok_or_else(|| CliError::Input("--hypersurface is required: the configuration carries none".into()));
    };
    let path = Path::new(arg);
    if !path.is_file() {
        let p = QPoly::parse(arg, &REAL4_VARS)
            .map_err(|e| CliError::Input(format!("--hypersurface {arg:?}: {e}")))?;
        return Ok((p, Vec::new()));
    }
    let text = read_text(path)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::json(path, e))?;
    let poly = if value.get("schema").is_some() {
        load_config(path)?
            .hypersurface
            .ok_or_else(|| CliError::Input(format!("{}: configuration carries no hypersurface", path.display())))?
    } else {
        serde_json::from_value(value).map_err(|e| CliError::json(path, e))?
    };
    Ok((poly, vec![path.to_path_buf()]))
}

fn foliate(g: &GlobalArgs, a: &FoliateArgs) -> CliResult<Outcome> {
    let config = load_config(&a.curves)?;
    if config.ground_field != GroundField::C2 {
        return Err(CliError::Input("foliate needs a complex (C2) configuration".into()));
    }
    let (poly, extra) = resolve_hypersurface(a.hypersurface.as_deref(), &config)?;
    let z = Hypersurface::new(poly.clone())?;
    let on_curve = build_matrix(&config).curve_points();
    let mut curves = Vec::with_capacity(config.n());
    for (j, f) in config.curves.iter().enumerate() {
        let curve = ComplexCurve::from_poly(f.clone())?;
        let pts: Vec<[GaussianRational; 2]> = on_curve[j].iter().map(|&i| config.points[i].clone()).collect();
        let mut containment = containment_check(&z, &curve)?;
        if matches!(containment, Containment::Unknown { .. }) && !pts.is_empty() {
            containment = sampled_containment(&z, &curve, &pts)?;
        }
        let samples: Vec<Vec<Rational>> = pts.iter().map(|p| iota(p).to_vec()).collect();
        let report = leaf_tangency_check(&z, &curve, &samples)?;
        curves.push(CurveFoliation {
            curve: j,
            all_pass: containment.is_contained() && report.all_pass(),
            containment,
            samples: samples.len(),
            passed: report.passed(),
            failed: report.failed(),
            skipped: report.skipped(),
            frame: report.frame,
            records: report.records,
        });
    }
    let violated = curves
        .iter()
        .any(|c| c.failed > 0 || matches!(c.containment, Containment::NotContained { .. }));
    let all_pass = !curves.is_empty() && curves.iter().all(|c| c.all_pass);
    let report = FoliateReport {
        schema: FOLIATE_SCHEMA.into(),
        hypersurface: poly,
        all_pass,
        curves,
    };
    let bytes = match g.format {
        Format::Json => json_bytes(&report),
        Format::Csv => {
            let mut rows = Vec::new();
            for c in &report.curves {
                for r in &c.records {
                    let point: Vec<String> = r.point.iter().map(ToString::to_string).collect();
                    let status = match &r.status {
                        TangencyStatus::Pass => "pass".to_string(),
                        TangencyStatus::Fail => "fail".to_string(),
                        TangencyStatus::Skipped(why) => format!("skipped: {why}"),
                    };
                    rows.push(vec![
                        c.curve.to_string(),
                        point.join(" "),
                        status,
                        r.defect.as_ref().map(ToString::to_string).unwrap_or_default(),
                        r.tangency.map(|t| t.to_string()).unwrap_or_default(),
                    ]);
                }
            }
            csv_records(&["curve", "point", "status", "defect", "tangency"], &rows)?
        }
    };
    let mut inputs = vec![a.curves.clone()];
    inputs.extend(extra);
    let mut out = Outcome::new(inputs, &a.out, bytes);
    out.exit_code = if violated {
        EXIT_VIOLATED
    } else if all_pass {
        EXIT_OK
    } else {
        EXIT_INDETERMINATE
    };
    if violated {
        out.notes.push("violated: a curve leaves the hypersurface or misses the distribution".into());
    } else if !all_pass {
        out.notes.push("indeterminate: some curve has no decided containment or no usable sample".into());
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundOut {
    pub schema: String,
    #[serde(flatten)]
    pub report: BoundReport,
}

fn bound(g: &GlobalArgs, a: &BoundArgs) -> CliResult<Outcome> {
    let (m, n, measured, inputs) = match &a.config {
        Some(path) => {
            let config = load_config(path)?;
            let count = build_matrix(&config).count();
            (config.m() as u64, config.n() as u64, count as u64, vec![path.clone()])
        }
        None => (
            a.m.expect("required by clap"),
            a.n.expect("required by clap"),
            a.incidences.expect("required by clap"),
            Vec::new(),
        ),
    };
    let report = evaluate_bounds(&BoundInput {
        m,
        n,
        k: a.k,
        s: a.s,
        epsilon: a.eps,
        measured,
        constant: a.c,
    })?;
    let bytes = match g.format {
        Format::Json => json_bytes(&BoundOut {
            schema: BOUND_SCHEMA.into(),
            report,
        }),
        Format::Csv => csv_bytes(&[report])?,
    };
    Ok(Outcome::new(inputs, &a.out, bytes))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitRow {
    pub m: f64,
    pub n: f64,
    #[serde(rename = "I")]
    pub i: f64,
    pub predicted: f64,
    pub relative_error: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitOut {
    pub schema: String,
    pub fit: FitReport,
    pub max_relative_error: f64,
    pub series: Vec<FitRow>,
}

#[derive(Serialize)]
struct PlotRow {
    log_m: f64,
    log_n: f64,
    log_i: f64,
    log_predicted: f64,
}

/// Reads series points from a CSV with header `m,n,I`, a JSON list, a
/// count report or a configuration.
pub fn read_series(path: &Path) -> CliResult<Vec<SeriesPoint>> {
    let text = read_text(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        let mut r = csv::Reader::from_reader(text.as_bytes());
        return r
            .deserialize()
            .collect::<Result<Vec<SeriesPoint>, _>>()
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())));
    }
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::json(path, e))?;
    let schema = value.get("schema").and_then(Value::as_str);
    if value.is_array() {
        serde_json::from_value(value).map_err(|e| CliError::json(path, e))
    } else if schema == Some(COUNT_SCHEMA) {
        let c: CountReport = serde_json::from_value(value).map_err(|e| CliError::json(path, e))?;
        Ok(vec![SeriesPoint {
            m: c.m as f64,
            n: c.n as f64,
            i: c.i as f64,
        }])
    } else if schema == Some(CONFIG_SCHEMA) {
        let config = load_config(path)?;
        let i = build_matrix(&config).count();
        Ok(vec![SeriesPoint {
            m: config.m() as f64,
            n: config.n() as f64,
            i: i as f64,
        }])
    } else {
        Err(CliError::Input(format!(
            "{}: expected a series list, a count report or a configuration",
            path.display()
        )))
    }
}

fn fit(g: &GlobalArgs, a: &FitArgs) -> CliResult<Outcome> {
    let mut series = Vec::new();
    for p in &a.inputs {
        series.extend(read_series(p)?);
    }
    let report = exponent_fit(&series)?;
    let rows: Vec<FitRow> = series
        .iter()
        .map(|p| {
            let predicted = report.predict(p.m, p.n);
            FitRow {
                m: p.m,
                n: p.n,
                i: p.i,
                predicted,
                relative_error: (predicted - p.i).abs() / p.i,
            }
        })
        .collect();
    let plot: Vec<PlotRow> = rows
        .iter()
        .map(|r| PlotRow {
            log_m: r.m.ln(),
            log_n: r.n.ln(),
            log_i: r.i.ln(),
            log_predicted: r.predicted.ln(),
        })
        .collect();
    let out = FitOut {
        schema: FIT_SCHEMA.into(),
        max_relative_error: rows.iter().map(|r| r.relative_error).fold(0.0, f64::max),
        fit: report,
        series: rows,
    };
    let bytes = match g.format {
        Format::Json => json_bytes(&out),
        Format::Csv => csv_bytes(&plot)?,
    };
    let result = Outcome::new(a.inputs.clone(), &a.out, bytes);
    match &a.plot {
        Some(path) => result.with_output(path, csv_bytes(&plot)?),
        None => Ok(result),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn generate_args(argv: &[&str]) -> (GlobalArgs, GenerateArgs) {
        let cli = Cli::try_parse_from(argv).unwrap();
        match cli.command {
            Command::Generate(a) => (cli.global, a),
            _ => panic!("generate expected"),
        }
    }

    #[test]
    fn flags_resolve_to_generator_spec() {
        let (g, a) = generate_args(&["incidence", "--seed", "5", "generate", "--family", "leaf", "--g", "z1", "--count", "3", "--out", "o"]);
        let spec = spec_from_flags(g.seed, &a).unwrap();
        assert_eq!(
            spec,
            GeneratorSpec::Leaf {
                g: "z1".into(),
                count: 3,
                samples: 10,
                seed: 5
            }
        );
        let (g, a) = generate_args(&["incidence", "generate", "--family", "complex-product", "--a", "3", "--out", "o"]);
        assert!(matches!(spec_from_flags(g.seed, &a), Err(CliError::Input(msg)) if msg.contains("--b")));
    }

    #[test]
    fn series_from_csv_and_json() {
        let dir = std::env::temp_dir().join(format!("incidence-series-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let csv_path = dir.join("s.csv");
        std::fs::write(&csv_path, "m,n,I\n2,1,1\n16,8,16\n").unwrap();
        let json_path = dir.join("s.json");
        std::fs::write(&json_path, r#"[{"m": 2, "n": 1, "i": 1}]"#).unwrap();
        let count_path = dir.join("c.json");
        std::fs::write(&count_path, r#"{"schema": "incidence-count/1", "m": 54, "n": 27, "I": 81}"#).unwrap();
        let csv = read_series(&csv_path).unwrap();
        assert_eq!(csv.len(), 2);
        assert_eq!(csv[1].i, 16.0);
        assert_eq!(read_series(&json_path).unwrap()[0].m, 2.0);
        assert_eq!(read_series(&count_path).unwrap()[0].i, 81.0);
        std::fs::write(&json_path, r#"{"schema": "unknown"}"#).unwrap();
        assert!(read_series(&json_path).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn duplicate_output_paths_are_rejected() {
        let out = Outcome::new(Vec::new(), Path::new("/x/a"), Vec::new());
        assert!(out.with_output(Path::new("/x/a"), Vec::new()).is_err());
    }
}
