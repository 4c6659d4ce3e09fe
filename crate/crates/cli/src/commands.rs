use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use dirdet::classify::{
    hierarchy_check, survey_exhaustive, Classifier3D, HierarchyViolation, SurveyConfig, Verdict3D, Witness,
};
use dirdet::construct::{
    cone, cone_correspondence_check, count_generators_through, graph, make_quadric, quadric_affine_part,
    quadric_determination, random_set, rho, subspaces_on_quadric, Character, CorrespondenceReport,
};
use dirdet::pg::AffineFlat;
use dirdet::span::{DeterminationEngine, PointSet};
use dirdet::Field;

use crate::pointfile;
use crate::report::{rows, rows_all, InputDigest, Report, Timing};
use crate::{Cli, Command, Construct, Verify};

/// Runs one command; `Ok(false)` means a verification failed.
pub fn run(cli: &Cli, argv: Vec<String>) -> Result<bool> {
    if let Some(t) = cli.threads {
        ensure!(t > 0, "--threads must be positive");
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let start = Instant::now();
    let mut digest = InputDigest::default();
    digest.add("seed", &cli.seed.to_le_bytes());
    digest.add("command", format!("{:?}", cli.command).as_bytes());
    let (passed, results) = match &cli.command {
        Command::Construct(c) => {
            let (set, comments) = construct(c, cli.seed, &mut digest)?;
            emit(cli, &pointfile::serialize(&set, &comments))?;
            return Ok(true);
        }
        Command::Directions { input, k, profiles } => (None, directions(&load(input, &mut digest)?, *k, *profiles)?),
        Command::Classify { input } => classify(&load(input, &mut digest)?)?,
        Command::Verify(v) => {
            let (ok, res) = verify(v, cli.seed, &mut digest)?;
            (Some(ok), res)
        }
    };
    let report = Report {
        command: argv,
        inputs_digest: digest.finish(),
        passed,
        results,
        timing: Timing {
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
            threads: rayon::current_num_threads(),
        },
    };
    emit(cli, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    Ok(passed.unwrap_or(true))
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path, digest: &mut InputDigest) -> Result<PointSet> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    digest.add("file", text.as_bytes());
    pointfile::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn field(q: u32) -> Result<Arc<Field>> {
    Ok(Arc::new(Field::of_order(q)?))
}

fn construct(c: &Construct, seed: u64, digest: &mut InputDigest) -> Result<(PointSet, Vec<String>)> {
    Ok(match c {
        Construct::Cone { base, n } => {
            let base_set = load(base, digest)?;
            let c = cone(&base_set, *n)?;
            let comment = format!("cone over {} (m={}) to n={n}, vertex {:?}", base.display(), c.base_n, rows(&c.vertex));
            (c.set, vec![comment])
        }
        Construct::Quadric { n, character, q } => {
            let f = field(*q)?;
            let spec = make_quadric(&f, *n, *character)?;
            let set = quadric_affine_part(f, &spec)?;
            let comment = format!(
                "quadric X0*X{n} = phi, {character}, g={}, phi={:?}",
                spec.g,
                spec.phi.coeffs()
            );
            (set, vec![comment])
        }
        Construct::Graph { q, coeffs } => {
            if let Some(c) = coeffs.iter().find(|&&c| c >= *q) {
                bail!("coefficient {c} is not below q={q}");
            }
            (graph(field(*q)?, coeffs)?, vec![format!("graph of polynomial {coeffs:?} (low to high)")])
        }
        Construct::Random { n, q, size } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let set = random_set(field(*q)?, *n, *size, &mut rng)?;
            (set, vec![format!("random {size}-subset, seed {seed}")])
        }
    })
}

fn directions(u: &PointSet, k: isize, profiles: bool) -> Result<Value> {
    let engine = DeterminationEngine::new(u.field().clone(), u.n(), k)?;
    let flags = engine.determined_flags(u)?;
    let pick = |want: bool| {
        engine
            .directions()
            .iter()
            .zip(&flags)
            .filter(move |(_, &f)| f == want)
            .map(|(s, _)| s)
    };
    let mut out = json!({
        "q": u.q(),
        "n": u.n(),
        "k": k,
        "size": u.len(),
        "determined": rows_all(pick(true)),
        "undetermined": rows_all(pick(false)),
    });
    if profiles {
        let list: Vec<Value> = flags
            .iter()
            .enumerate()
            .filter(|(_, &f)| !f)
            .map(|(i, _)| {
                let p = engine.profile_at(u, i);
                json!({
                    "direction": rows(&p.direction),
                    "all_complete": p.all_complete(),
                    "flats": p.records.iter().map(|r| json!({
                        "flat": flat_json(&r.flat),
                        "size": r.size,
                        "span_dim": r.span_dim,
                        "complete": r.complete,
                    })).collect::<Vec<_>>(),
                })
            })
            .collect();
        out["profiles"] = Value::Array(list);
    }
    Ok(out)
}

fn flat_json(f: &AffineFlat) -> Value {
    json!({ "direction": rows(f.direction()), "rep": f.rep().coords() })
}

fn witness_json(v: &Verdict3D) -> Value {
    match &v.witness {
        Witness::None => json!({ "kind": "none" }),
        Witness::ParallelPlanes { line, lines } => json!({
            "kind": "parallel_planes",
            "line": rows(line),
            "lines": lines.iter().map(flat_json).collect::<Vec<_>>(),
        }),
        Witness::Quadric { lines, fit } => json!({
            "kind": "quadric",
            "lines": [rows(&lines.0), rows(&lines.1)],
            "form": fit.form.coeffs(),
            "disjoint_lines": [rows(&fit.disjoint_lines.0), rows(&fit.disjoint_lines.1)],
        }),
        Witness::Cylinder { vertex } => json!({ "kind": "cylinder", "vertex": rows(vertex) }),
        Witness::Planar { plane } => json!({ "kind": "planar", "plane": flat_json(plane) }),
    }
}

fn classify(u: &PointSet) -> Result<(Option<bool>, Value)> {
    ensure!(u.n() == 3, "classify needs a point set in AG(3,q), got n={}", u.n());
    let q = u.q() as usize;
    ensure!(u.len() == q * q, "classify needs {} points, got {}", q * q, u.len());
    let classifier = Classifier3D::new(u.field().clone())?;
    match classifier.classify(u) {
        Ok(v) => {
            let check = v.check_witness(u.field(), u);
            let results = json!({
                "q": q,
                "tag": v.tag,
                "undetermined": rows_all(&v.undetermined),
                "cylinder": v.cylinder.as_ref().map(rows),
                "witness": witness_json(&v),
                "witness_check": match &check { Ok(()) => "ok".to_string(), Err(e) => e.clone() },
            });
            Ok((Some(check.is_ok()), results))
        }
        Err(dirdet::Error::TheoremViolation(msg)) => {
            let und = classifier.line_engine().undetermined(u)?;
            Ok((
                Some(false),
                json!({ "q": q, "violation": msg, "undetermined": rows_all(&und) }),
            ))
        }
        Err(e) => Err(e.into()),
    }
}

fn verify(v: &Verify, seed: u64, digest: &mut InputDigest) -> Result<(bool, Value)> {
    match v {
        Verify::Hierarchy { input } => {
            let u = load(input, digest)?;
            let r = hierarchy_check(&u)?;
            let violations: Vec<Value> = r
                .violations
                .iter()
                .map(|v| match v {
                    HierarchyViolation::NoDeterminedExtension { subspace } => {
                        json!({ "check": "extension", "subspace": rows(subspace) })
                    }
                    HierarchyViolation::NoDeterminedHyperplane { subspace } => {
                        json!({ "check": "hyperplane", "subspace": rows(subspace) })
                    }
                    HierarchyViolation::AllSubspacesDetermined { hyperplane, k } => {
                        json!({ "check": "undetermined_hyperplane", "subspace": rows(hyperplane), "k": k })
                    }
                    HierarchyViolation::UncoveredDirection { point } => {
                        json!({ "check": "direction_union", "subspace": rows(point) })
                    }
                })
                .collect();
            Ok((
                r.passed(),
                json!({
                    "n": r.n, "q": r.q,
                    "determined": r.determined,
                    "undetermined": r.undetermined,
                    "checks": r.checks,
                    "violations": violations,
                }),
            ))
        }
        Verify::Cone { base_n, q, n, base, r } => {
            let base_set = match base {
                Some(path) => load(path, digest)?,
                None => {
                    digest.add("base", format!("random m={base_n} q={q}").as_bytes());
                    let size = (*q as usize).pow(*base_n as u32 - 1);
                    random_set(field(*q)?, *base_n, size, &mut ChaCha8Rng::seed_from_u64(seed))?
                }
            };
            ensure!(
                base_set.n() == *base_n && base_set.q() == *q,
                "base file is AG({},{}), expected AG({base_n},{q})",
                base_set.n(),
                base_set.q()
            );
            ensure!(*n >= 2, "n must be at least 2");
            let rs: Vec<usize> = match r {
                Some(r) => vec![*r],
                None => (0..=*n - 2).collect(),
            };
            let reports: Vec<CorrespondenceReport> = rs
                .iter()
                .map(|&r| cone_correspondence_check(&base_set, *n, r))
                .collect::<dirdet::Result<_>>()?;
            let passed = reports.iter().all(CorrespondenceReport::passed);
            Ok((
                passed,
                json!({
                    "base": pointfile::serialize(&base_set, &[]),
                    "n": n,
                    "reports": reports.iter().map(correspondence_json).collect::<Vec<_>>(),
                }),
            ))
        }
        Verify::Quadric { n, q, character, rho_samples } => verify_quadric(*n, *q, *character, *rho_samples, seed),
        Verify::Survey { q, max_violations } => {
            let cfg = SurveyConfig {
                threads: None,
                max_stored_violations: *max_violations,
                ..SurveyConfig::default()
            };
            let tally = survey_exhaustive(*q, &cfg)?;
            let expected = dirdet::classify::combinadic::binomial((q * q * q) as u64, (q * q) as u64);
            let passed = tally.passed() && tally.total == expected;
            Ok((passed, serde_json::to_value(&tally)?))
        }
    }
}

fn correspondence_json(r: &CorrespondenceReport) -> Value {
    json!({
        "r": r.r,
        "passed": r.passed(),
        "checked": r.checked,
        "agreed": r.agreed,
        "undetermined": r.undetermined,
        "inside_vertex": r.inside_vertex,
        "out_of_range": r.out_of_range,
        "dimension_mismatches": rows_all(&r.dimension_mismatches),
        "disagreements": r.disagreements.iter().map(|d| json!({
            "w": rows(&d.w),
            "projected": rows(&d.projected),
            "cone_undetermined": d.cone_undetermined,
            "base_undetermined": d.base_undetermined,
        })).collect::<Vec<_>>(),
    })
}

fn verify_quadric(n: usize, q: u32, character: Character, samples: usize, seed: u64) -> Result<(bool, Value)> {
    let f = field(q)?;
    let spec = make_quadric(&f, n, character)?;
    let det = quadric_determination(f.clone(), &spec)?;

    let candidates = subspaces_on_quadric(&f, &spec, spec.g as isize - 1)?;
    let chosen: Vec<usize> = if samples == 0 || candidates.len() <= samples {
        (0..candidates.len()).collect()
    } else {
        let mut idx = sample(&mut ChaCha8Rng::seed_from_u64(seed), candidates.len(), samples).into_vec();
        idx.sort_unstable();
        idx
    };
    let expected = rho(q, n, character)?;
    let mut mismatches = Vec::new();
    for &i in &chosen {
        let count = count_generators_through(&f, &spec, &candidates[i])?;
        if count != expected {
            mismatches.push(json!({ "subspace": rows(&candidates[i]), "count": count }));
        }
    }

    let u = quadric_affine_part(f.clone(), &spec)?;
    let other_k: serde_json::Map<String, Value> = (0..=n as isize - 2)
        .filter(|&k| k != spec.g as isize)
        .map(|k| {
            let engine = DeterminationEngine::new(f.clone(), n, k)?;
            Ok((k.to_string(), json!(engine.undetermined_indices(&u)?.len())))
        })
        .collect::<dirdet::Result<_>>()?;

    let passed = det.passed() && mismatches.is_empty();
    let note = match (det.exceptional, det.extra.is_empty()) {
        (true, false) => Some("exception: non-generator undetermined subspaces found"),
        (true, true) => Some("exception expected but no non-generator undetermined subspace found"),
        (false, false) => Some("non-generator undetermined subspaces found outside the exceptional cases"),
        (false, true) => None,
    };
    Ok((
        passed,
        json!({
            "n": n, "q": q, "character": character.to_string(), "g": spec.g,
            "phi": spec.phi.coeffs(),
            "exceptional": det.exceptional,
            "note": note,
            "undetermined": rows_all(&det.undetermined),
            "generators": rows_all(&det.generators),
            "extra": rows_all(&det.extra),
            "missing": rows_all(&det.missing),
            "rho": {
                "formula": expected,
                "candidates": candidates.len(),
                "tested": chosen.len(),
                "mismatches": mismatches,
            },
            "undetermined_other_k": other_k,
        }),
    ))
}
