use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use jordanscope::algebra::{rat_string, spectrum_exact, GaussRat, MultiPoly, C64};
use jordanscope::jordan::{jordan_census, verify_rank_identities, IdentityReport, JordanCensus};
use jordanscope::scanner::{
    builtin_families, check_jst_bound, check_split_bound, check_square_free_identity, jst_defining_functions,
    sample_points, scan_grid, square_free_part_family, zero_set_mismatches, GridSpec, JstFunctions, MatrixFamily,
    ScanOptions, SquareFreeCheck,
};
use jordanscope::sylv::{check_coeff_bound, split_defining_functions, BoundReport};
use jordanscope::tracker::{track_path, DEFAULT_PROBE_RADIUS};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::input::{load_family, parse_box, parse_path, parse_point, parse_res};
use crate::manifest::{emit, hash_hex, RunManifest, Tolerances};
use crate::{rel_tol, Cli, Cmd, Failure};

/// Violations listed per bound report; the full count is kept.
const MAX_LISTED_VIOLATIONS: usize = 20;

fn family_hash(families: &[&MatrixFamily]) -> String {
    let specs: Vec<_> = families.iter().map(|f| f.to_spec()).collect();
    hash_hex(serde_json::to_string(&specs).expect("spec serializes").as_bytes())
}

fn strings(ps: &[MultiPoly], family: &MatrixFamily) -> Vec<String> {
    ps.iter().map(|p| p.to_string_with(&family.params)).collect()
}

fn point_strings(pt: &[GaussRat]) -> Vec<[String; 2]> {
    pt.iter().map(|z| [rat_string(&z.re), rat_string(&z.im)]).collect()
}

struct Run {
    manifest: RunManifest,
    start: Instant,
    timing: bool,
}

impl Run {
    fn new(cli: &Cli, command: &str, families: &[&MatrixFamily], probe_radius: Option<f64>) -> Result<Self, Failure> {
        Ok(Run {
            manifest: RunManifest {
                command: command.into(),
                arguments: BTreeMap::new(),
                input_hash: family_hash(families),
                tolerances: Tolerances {
                    rel_tol: rel_tol(cli)?,
                    probe_radius,
                },
                seed: cli.seed,
                tool_version: env!("CARGO_PKG_VERSION").into(),
                timing_ms: None,
            },
            start: Instant::now(),
            timing: cli.timing,
        })
    }

    fn arg(mut self, key: &str, value: impl ToString) -> Self {
        self.manifest.arguments.insert(key.into(), value.to_string());
        self
    }

    fn tol(&self) -> f64 {
        self.manifest.tolerances.rel_tol
    }

    fn finish<T: Serialize>(mut self, result: &T, out: Option<&Path>) -> Result<(), Failure> {
        if self.timing {
            self.manifest.timing_ms = Some(self.start.elapsed().as_secs_f64() * 1e3);
        }
        emit(&self.manifest, result, out)
    }
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let out = cli.out.as_deref();
    match &cli.cmd {
        Cmd::Census { family, point } => census(cli, family, point, out),
        Cmd::SplitSet { family, samples } => split_set(cli, family, *samples, out),
        Cmd::JstSet { family, samples } => jst_set(cli, family, *samples, out),
        Cmd::Scan {
            family,
            bbox,
            res,
            probe_radius,
            jobs,
            csv,
        } => scan(cli, family, bbox, res, *probe_radius, *jobs, csv.as_deref(), out),
        Cmd::Track { family, path, steps, csv } => track(cli, family, path, *steps, csv.as_deref(), out),
        Cmd::Verify {
            family,
            builtin_corpus,
            point,
            census,
            strict_bounds,
            samples,
        } => verify(
            cli,
            family.as_deref(),
            *builtin_corpus,
            point.as_deref(),
            census.as_deref(),
            *strict_bounds,
            *samples,
            out,
        ),
    }
}

#[derive(Serialize)]
struct CensusResult<'a> {
    label: &'a Option<String>,
    point: Vec<[String; 2]>,
    census: JordanCensus,
}

fn census(cli: &Cli, family: &str, point: &str, out: Option<&Path>) -> Result<(), Failure> {
    let fam = load_family(family)?;
    let pt = parse_point(point, fam.nparams())?;
    let run = Run::new(cli, "census", &[&fam], None)?.arg("point", point);
    let a = fam.eval(&pt)?;
    let c = jordanscope::jordan::census_exact(&a, run.tol())?;
    run.finish(
        &CensusResult {
            label: &fam.label,
            point: point_strings(&pt),
            census: c,
        },
        out,
    )
}

/// Bound report with the violation list capped.
#[derive(Clone, Serialize)]
struct BoundEntry {
    family: Option<String>,
    status: &'static str,
    violation_count: usize,
    #[serde(flatten)]
    report: BoundReport,
}

fn bound_entry(family: &MatrixFamily, mut report: BoundReport) -> BoundEntry {
    let count = report.violations.len();
    report.violations.truncate(MAX_LISTED_VIOLATIONS);
    let status = if !report.applicable {
        "not-applicable"
    } else if count == 0 {
        "pass"
    } else if report.homogenized_violations > 0 {
        "fail"
    } else {
        // the inequality only fails where its right side is below 1
        "known-defect"
    };
    BoundEntry {
        family: family.label.clone(),
        status,
        violation_count: count,
        report,
    }
}

#[derive(Serialize)]
struct SplitSetResult {
    label: Option<String>,
    n: usize,
    r_max: usize,
    empty: bool,
    functions: Vec<String>,
    note: &'static str,
    bounds: Vec<BoundEntry>,
}

fn split_set_result(fam: &MatrixFamily, samples: usize, rng: &mut ChaCha8Rng) -> Result<SplitSetResult, Failure> {
    let cp = fam.char_poly();
    let split = split_defining_functions(&cp, fam.nparams(), rng)?;
    let pts = sample_points(rng, fam.nparams(), samples, 1.0);
    let bounds = vec![
        bound_entry(fam, check_coeff_bound(&split, &cp, &pts)),
        bound_entry(fam, check_split_bound(&split, fam, &pts)),
    ];
    Ok(SplitSetResult {
        label: fam.label.clone(),
        n: split.n,
        r_max: split.r_max,
        empty: split.split_empty,
        functions: if split.split_empty { Vec::new() } else { strings(&split.functions, fam) },
        note: split.note,
        bounds,
    })
}

fn split_set(cli: &Cli, family: &str, samples: usize, out: Option<&Path>) -> Result<(), Failure> {
    let fam = load_family(family)?;
    let run = Run::new(cli, "split-set", &[&fam], None)?.arg("samples", samples);
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let result = split_set_result(&fam, samples, &mut rng)?;
    run.finish(&result, out)
}

#[derive(Serialize)]
struct JstSetResult {
    label: Option<String>,
    n: usize,
    empty: bool,
    g: Vec<String>,
    split_empty: bool,
    d: String,
    m_generic: usize,
    r: Vec<usize>,
    k0: usize,
    f: Vec<Vec<String>>,
    h: Option<Vec<String>>,
    h_count: usize,
    h_truncated: bool,
    notes: Vec<String>,
    square_free_check: SquareFreeCheck,
    bounds: Vec<BoundEntry>,
}

fn jst_set_result(
    fam: &MatrixFamily,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<(JstSetResult, JstFunctions), Failure> {
    let jst = jst_defining_functions(fam, rng)?;
    let sf = square_free_part_family(fam)?;
    let sq = check_square_free_identity(fam, &sf, 25, rng)?;
    let pts = sample_points(rng, fam.nparams(), samples, 1.0);
    let bounds = vec![bound_entry(fam, check_jst_bound(&jst, fam, &pts))];
    let result = JstSetResult {
        label: fam.label.clone(),
        n: jst.n,
        empty: jst.empty,
        g: strings(&jst.g, fam),
        split_empty: jst.split_empty,
        d: jst.d.to_string_with(&fam.params),
        m_generic: jst.m_generic,
        r: jst.r.clone(),
        k0: jst.k0,
        f: jst.f.iter().map(|fk| strings(fk, fam)).collect(),
        h: jst.h.as_ref().map(|h| strings(h, fam)),
        h_count: jst.h_count,
        h_truncated: jst.h.is_none(),
        notes: jst.notes.clone(),
        square_free_check: sq,
        bounds,
    };
    Ok((result, jst))
}

fn jst_set(cli: &Cli, family: &str, samples: usize, out: Option<&Path>) -> Result<(), Failure> {
    let fam = load_family(family)?;
    let run = Run::new(cli, "jst-set", &[&fam], None)?.arg("samples", samples);
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let (result, _) = jst_set_result(&fam, samples, &mut rng)?;
    run.finish(&result, out)
}

#[allow(clippy::too_many_arguments)]
fn scan(
    cli: &Cli,
    family: &str,
    bbox: &str,
    res: &str,
    probe_radius: f64,
    jobs: usize,
    csv_path: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let fam = load_family(family)?;
    let bounds = parse_box(bbox, fam.nparams())?;
    let resolution = parse_res(res, fam.nparams())?;
    let run = Run::new(cli, "scan", &[&fam], Some(probe_radius))?
        .arg("box", bbox)
        .arg("res", res);
    let grid = GridSpec::new(fam.params.clone(), &bounds, &resolution)?;
    let opts = ScanOptions {
        probe_radius,
        rel_tol: run.tol(),
        seed: cli.seed,
        jobs,
    };
    let report = scan_grid(&fam, &grid, &opts)?;
    if let Some(p) = csv_path {
        let mut w = csv::Writer::from_path(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
        let mut header: Vec<String> = fam.params.clone();
        header.extend(["kind", "distinct", "rank_theta", "blocks"].map(String::from));
        let io = |e: csv::Error| Failure::Input(format!("{}: {e}", p.display()));
        w.write_record(&header).map_err(io)?;
        for pc in &report.points {
            let mut row: Vec<String> = pc.point.iter().map(|z| format!("{}", z.to_c64().re)).collect();
            row.push(format!("{:?}", pc.kind));
            row.push(pc.distinct.to_string());
            row.push(pc.rank_theta.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" "));
            row.push(pc.census.as_ref().map_or(String::new(), |c| {
                c.aggregate.iter().map(|(l, t)| format!("{l}:{t}")).collect::<Vec<_>>().join(" ")
            }));
            w.write_record(&row).map_err(io)?;
        }
        w.flush().map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
    }
    run.finish(&report, out)
}

fn track(
    cli: &Cli,
    family: &str,
    path: &str,
    steps: usize,
    csv_path: Option<&Path>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let fam = load_family(family)?;
    let vertices = parse_path(path, fam.nparams())?;
    let run = Run::new(cli, "track", &[&fam], None)?
        .arg("path", path)
        .arg("steps", steps);
    let result = track_path(&fam, &vertices, steps)?;
    if let Some(p) = csv_path {
        let io = |e: csv::Error| Failure::Input(format!("{}: {e}", p.display()));
        let mut w = csv::Writer::from_path(p).map_err(io)?;
        let mut header = vec!["t".to_string()];
        for name in &fam.params {
            header.push(format!("{name}_re"));
            header.push(format!("{name}_im"));
        }
        header.extend(["branch", "value_re", "value_im", "multiplicity", "residual"].map(String::from));
        w.write_record(&header).map_err(io)?;
        for s in &result.samples {
            for (b, (v, m)) in s.values.iter().zip(&s.multiplicities).enumerate() {
                let mut row = vec![format!("{}", s.t)];
                for z in &s.point {
                    row.push(format!("{}", z.re));
                    row.push(format!("{}", z.im));
                }
                row.extend([b.to_string(), v.re.to_string(), v.im.to_string(), m.to_string(), s.residual.to_string()]);
                w.write_record(&row).map_err(io)?;
            }
        }
        w.flush().map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
    }
    run.finish(&result, out)
}

#[derive(Serialize)]
struct IdentityFailure {
    point: Vec<[String; 2]>,
    path: &'static str,
    detail: String,
}

#[derive(Serialize, Default)]
struct IdentitySummary {
    points: usize,
    exact_checked: usize,
    float_checked: usize,
    failures: Vec<IdentityFailure>,
}

fn identity_points(fam: &MatrixFamily, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<GaussRat>>, Failure> {
    let per_axis = if fam.nparams() <= 2 { 5 } else { 3 };
    let grid = GridSpec::new(fam.params.clone(), &vec![(-1.0, 1.0); fam.nparams()], &vec![per_axis; fam.nparams()])?;
    let mut pts: Vec<Vec<GaussRat>> = (0..grid.len()).map(|i| grid.node(i)).collect();
    for _ in 0..5 {
        pts.push(jordanscope::ranklab::random_rational_point(rng, fam.nparams()));
    }
    Ok(pts)
}

fn describe(r: &IdentityReport) -> String {
    r.failures()
        .map(|c| format!("{} (j={:?}, k={:?}): {} vs {}", c.identity, c.j, c.k, c.lhs, c.rhs))
        .collect::<Vec<_>>()
        .join("; ")
}

fn check_identities(fam: &MatrixFamily, pts: &[Vec<GaussRat>], tol: f64) -> Result<IdentitySummary, Failure> {
    let mut s = IdentitySummary {
        points: pts.len(),
        ..Default::default()
    };
    for pt in pts {
        let a = fam.eval(pt)?;
        let spec = spectrum_exact(&a)?;
        let mut fail = |path, detail: String| {
            s.failures.push(IdentityFailure {
                point: point_strings(pt),
                path,
                detail,
            })
        };
        let mut exact_signature = None;
        if spec.iter().all(|e| e.exact.is_some()) {
            let eig: Vec<(GaussRat, usize)> =
                spec.iter().map(|e| (e.exact.clone().unwrap(), e.multiplicity)).collect();
            let vals: Vec<GaussRat> = eig.iter().map(|e| e.0.clone()).collect();
            match jordan_census(&a, &eig, tol) {
                Ok(c) => {
                    let r = verify_rank_identities(&a, &vals, &c, tol)?;
                    if !r.all_pass {
                        fail("exact", describe(&r));
                    }
                    exact_signature = Some(c.signature());
                }
                Err(e) => fail("exact", e.to_string()),
            }
            s.exact_checked += 1;
        }
        let ac = a.to_c64();
        let eig: Vec<(C64, usize)> = spec.iter().map(|e| (e.value, e.multiplicity)).collect();
        let vals: Vec<C64> = eig.iter().map(|e| e.0).collect();
        match jordan_census(&ac, &eig, tol) {
            Ok(c) => {
                let r = verify_rank_identities(&ac, &vals, &c, tol)?;
                if !r.all_pass {
                    fail("float", describe(&r));
                }
                if exact_signature.is_some_and(|sig| sig != c.signature()) {
                    fail("float", "census differs from the exact census".into());
                }
            }
            Err(e) => fail("float", e.to_string()),
        }
        s.float_checked += 1;
    }
    Ok(s)
}

#[derive(Serialize)]
struct ZeroSetCheck {
    nodes: usize,
    flagged: usize,
    mismatches: Vec<Vec<[String; 2]>>,
}

#[derive(Serialize)]
struct FamilyVerification {
    label: Option<String>,
    identities: IdentitySummary,
    square_free_check: SquareFreeCheck,
    zero_set: ZeroSetCheck,
    bounds: Vec<BoundEntry>,
    pass: bool,
}

fn verify_family(
    fam: &MatrixFamily,
    samples: usize,
    strict: bool,
    tol: f64,
    rng: &mut ChaCha8Rng,
) -> Result<FamilyVerification, Failure> {
    let pts = identity_points(fam, rng)?;
    let identities = check_identities(fam, &pts, tol)?;
    let split = split_set_result(fam, samples, rng)?;
    let (jst, defs) = jst_set_result(fam, samples, rng)?;
    let per_axis = if fam.nparams() <= 2 { 9 } else { 3 };
    let grid = GridSpec::new(fam.params.clone(), &vec![(-1.0, 1.0); fam.nparams()], &vec![per_axis; fam.nparams()])?;
    let nodes: Vec<Vec<GaussRat>> = (0..grid.len()).map(|i| grid.node(i)).collect();
    let mismatches = zero_set_mismatches(fam, &defs, &nodes, DEFAULT_PROBE_RADIUS, tol)?;
    let flagged = nodes.iter().filter(|p| defs.vanishes_at(p)).count();
    let mut bounds = split.bounds;
    bounds.extend(jst.bounds);
    let bound_ok = bounds
        .iter()
        .all(|b| b.status == "pass" || b.status == "not-applicable" || (!strict && b.status == "known-defect"));
    let pass = identities.failures.is_empty() && jst.square_free_check.pass && mismatches.is_empty() && bound_ok;
    Ok(FamilyVerification {
        label: fam.label.clone(),
        identities,
        square_free_check: jst.square_free_check,
        zero_set: ZeroSetCheck {
            nodes: nodes.len(),
            flagged,
            mismatches: mismatches.iter().map(|p| point_strings(p)).collect(),
        },
        bounds,
        pass,
    })
}

/// Census as written by the census command (or its `result` object).
#[derive(Deserialize)]
struct CensusFile {
    eigenvalues: Vec<[f64; 2]>,
    multiplicities: Vec<usize>,
    blocks: Vec<BTreeMap<String, usize>>,
    #[serde(default)]
    aggregate: Option<BTreeMap<String, usize>>,
}

fn read_census(path: &Path) -> Result<JordanCensus, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let inner = value
        .pointer("/result/census")
        .or_else(|| value.get("census"))
        .unwrap_or(&value)
        .clone();
    let cf: CensusFile =
        serde_json::from_value(inner).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let size_map = |m: &BTreeMap<String, usize>| -> Result<BTreeMap<usize, usize>, Failure> {
        m.iter()
            .map(|(k, v)| {
                k.parse::<usize>()
                    .map(|k| (k, *v))
                    .map_err(|e| Failure::Input(format!("block size '{k}': {e}")))
            })
            .collect()
    };
    let blocks: Vec<BTreeMap<usize, usize>> = cf.blocks.iter().map(size_map).collect::<Result<_, _>>()?;
    if blocks.len() != cf.eigenvalues.len() || cf.multiplicities.len() != cf.eigenvalues.len() {
        return Err(Failure::Input("census arrays have different lengths".into()));
    }
    let aggregate = match &cf.aggregate {
        Some(a) => size_map(a)?,
        None => {
            let mut agg = BTreeMap::new();
            for b in &blocks {
                for (&l, &t) in b {
                    *agg.entry(l).or_insert(0) += t;
                }
            }
            agg
        }
    };
    Ok(JordanCensus {
        eigenvalues: cf.eigenvalues.iter().map(|e| C64::new(e[0], e[1])).collect(),
        exact: vec![None; cf.eigenvalues.len()],
        multiplicities: cf.multiplicities,
        blocks,
        aggregate,
        profiles: Vec::new(),
        exact_ranks: false,
    })
}

#[derive(Serialize)]
struct CensusVerification {
    point: Vec<[String; 2]>,
    eigenvalues_match: bool,
    report: IdentityReport,
    pass: bool,
}

fn verify_census(fam: &MatrixFamily, point: &str, path: &Path, tol: f64) -> Result<CensusVerification, Failure> {
    let pt = parse_point(point, fam.nparams())?;
    let claimed = read_census(path)?;
    let a = fam.eval(&pt)?;
    let spec = spectrum_exact(&a)?;
    let eigenvalues_match = spec.len() == claimed.eigenvalues.len()
        && spec
            .iter()
            .zip(&claimed.eigenvalues)
            .all(|(e, c)| (e.value - c).norm() <= 1e-6 * (1.0 + e.value.norm()));
    let report = if spec.iter().all(|e| e.exact.is_some()) {
        let vals: Vec<GaussRat> = spec.iter().map(|e| e.exact.clone().unwrap()).collect();
        verify_rank_identities(&a, &vals, &claimed, tol)?
    } else {
        let vals: Vec<C64> = spec.iter().map(|e| e.value).collect();
        verify_rank_identities(&a.to_c64(), &vals, &claimed, tol)?
    };
    Ok(CensusVerification {
        point: point_strings(&pt),
        eigenvalues_match,
        pass: eigenvalues_match && report.all_pass,
        report,
    })
}

#[derive(Serialize)]
struct VerifyResult {
    strict_bounds: bool,
    families: Vec<FamilyVerification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    census_check: Option<CensusVerification>,
    all_pass: bool,
}

#[allow(clippy::too_many_arguments)]
fn verify(
    cli: &Cli,
    family: Option<&str>,
    corpus: bool,
    point: Option<&str>,
    census: Option<&Path>,
    strict: bool,
    samples: usize,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let families: Vec<MatrixFamily> = match (family, corpus) {
        (Some(f), false) => vec![load_family(f)?],
        (None, true) => builtin_families(),
        (Some(_), true) => return Err(Failure::Input("give a family or --builtin-corpus, not both".into())),
        (None, false) => return Err(Failure::Input("give a family or --builtin-corpus".into())),
    };
    if census.is_some() != point.is_some() || (census.is_some() && corpus) {
        return Err(Failure::Input("--census and --point go together, with a single family".into()));
    }
    let refs: Vec<&MatrixFamily> = families.iter().collect();
    let mut run = Run::new(cli, "verify", &refs, Some(DEFAULT_PROBE_RADIUS))?
        .arg("samples", samples)
        .arg("strict_bounds", strict);
    if let Some(p) = point {
        run = run.arg("point", p);
    }
    let tol = run.tol();
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let (results, census_check) = match (point, census) {
        (Some(p), Some(c)) => (Vec::new(), Some(verify_census(&families[0], p, c, tol)?)),
        _ => (
            families
                .iter()
                .map(|f| verify_family(f, samples, strict, tol, &mut rng))
                .collect::<Result<Vec<_>, _>>()?,
            None,
        ),
    };
    let all_pass = results.iter().all(|r| r.pass) && census_check.as_ref().is_none_or(|c| c.pass);
    let result = VerifyResult {
        strict_bounds: strict,
        families: results,
        census_check,
        all_pass,
    };
    run.finish(&result, out)?;
    if all_pass {
        Ok(())
    } else {
        let failed: Vec<String> = result
            .families
            .iter()
            .filter(|f| !f.pass)
            .map(|f| f.label.clone().unwrap_or_else(|| "family".into()))
            .collect();
        Err(Failure::Validation(if failed.is_empty() {
            "census check failed".into()
        } else {
            format!("checks failed for {}", failed.join(", "))
        }))
    }
}
