use std::ops::RangeInclusive;
use std::path::PathBuf;

use num_bigint::BigInt;
use serde_json::{json, Value};
use spkl_core::bounds;
use spkl_core::exec::Execution;
use spkl_core::sparse_paving::{self, SparsePavingMatroid};
use spkl_core::sweep::{self, CPolicy, VerifyConfig};
use spkl_core::tableaux::{self, SkytFilling};
use spkl_core::{IntPolynomial, Subset};

use crate::doc::ChDocument;
use crate::report::{num, poly, poly_text, Failure, Outcome, Table};

/// Where `c = |CH|` comes from: a number, or a validated family on disk.
pub struct Instance {
    pub m: u32,
    pub d: u32,
    pub c: u64,
    pub family: Option<SparsePavingMatroid>,
}

pub fn resolve_instance(
    m: Option<u32>,
    d: Option<u32>,
    c: Option<u64>,
    ch_file: Option<&PathBuf>,
) -> Result<Instance, Failure> {
    match (ch_file, c) {
        (Some(_), Some(_)) => Err(Failure::Input("give either --c or --ch-file, not both".into())),
        (Some(path), None) => {
            let doc = ChDocument::read(path)?;
            if m.is_some_and(|m| m != doc.m) || d.is_some_and(|d| d != doc.d) {
                return Err(Failure::Input(format!(
                    "--m/--d disagree with the CH document (m = {}, d = {})",
                    doc.m, doc.d
                )));
            }
            let family = doc.to_matroid()?;
            Ok(Instance { m: doc.m, d: doc.d, c: family.ch().len() as u64, family: Some(family) })
        }
        (None, c) => {
            let (Some(m), Some(d)) = (m, d) else {
                return Err(Failure::Input("--m and --d are required without --ch-file".into()));
            };
            Ok(Instance { m, d, c: c.unwrap_or(0), family: None })
        }
    }
}

fn instance_inputs(inst: &Instance, unchecked: bool) -> Value {
    json!({
        "m": inst.m,
        "d": inst.d,
        "c": inst.c,
        "ch": inst.family.as_ref().map(ChDocument::from_matroid),
        "unchecked": unchecked,
    })
}

fn kl_polynomial(inst: &Instance, unchecked: bool) -> Result<IntPolynomial, Failure> {
    Ok(if unchecked {
        sparse_paving::kl_polynomial_unchecked(inst.m, inst.d, inst.c)?
    } else {
        sparse_paving::kl_polynomial(inst.m, inst.d, inst.c)?
    })
}

pub fn coeff(inst: Instance, i: Option<u32>, unchecked: bool) -> Result<Outcome, Failure> {
    let Some(i) = i else {
        return poly_command(inst, unchecked);
    };
    let value = if unchecked {
        sparse_paving::kl_coefficient_unchecked(inst.m, inst.d, inst.c, i)?
    } else {
        sparse_paving::kl_coefficient(inst.m, inst.d, inst.c, i)?
    };
    let mut inputs = instance_inputs(&inst, unchecked);
    inputs["i"] = json!(i);
    let mut table = Table::new(&["m", "d", "c", "i", "coefficient"]);
    table.push([inst.m.to_string(), inst.d.to_string(), inst.c.to_string(), i.to_string(), value.to_string()]);
    Ok(Outcome {
        inputs,
        results: json!({ "coefficient": num(&value) }),
        table,
        text: format!("[t^{i}] P(t) = {value}\n"),
        mismatch: None,
    })
}

pub fn poly_command(inst: Instance, unchecked: bool) -> Result<Outcome, Failure> {
    let p = kl_polynomial(&inst, unchecked)?;
    let chi = if inst.d >= 1 {
        Some(if unchecked {
            sparse_paving::characteristic_polynomial_unchecked(inst.m, inst.d, inst.c)?
        } else {
            sparse_paving::characteristic_polynomial(inst.m, inst.d, inst.c)?
        })
    } else {
        None
    };
    let mut table = Table::new(&["m", "d", "c", "degree", "coefficient"]);
    for (k, x) in p.coeffs().iter().enumerate() {
        table.push([inst.m.to_string(), inst.d.to_string(), inst.c.to_string(), k.to_string(), x.to_string()]);
    }
    let mut text = format!("P(t) = {}\n", poly_text(&p));
    if let Some(chi) = &chi {
        text.push_str(&format!("chi(t) = {}\n", poly_text(chi)));
    }
    Ok(Outcome {
        inputs: instance_inputs(&inst, unchecked),
        results: json!({
            "kl_polynomial": poly(&p),
            "characteristic_polynomial": chi.as_ref().map(poly),
        }),
        table,
        text,
        mismatch: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Alt,
    Positive,
    Both,
}

fn filling_json(f: &SkytFilling) -> Value {
    let shape = f.shape();
    let band_start = shape.a() as usize;
    let band_end = band_start + 2 * (shape.i() as usize - 1);
    let band: Vec<&[u32]> = f.entries()[band_start..band_end].chunks(2).collect();
    json!({ "left": f.left_column(), "band": band, "right": f.right_column() })
}

pub fn skyt(a: u32, i: u32, b: u32, enumerate: bool, method: Method, cap: u32) -> Result<Outcome, Failure> {
    let degenerate = i == 0 || a < 2 || b < 2;
    let alternating = tableaux::count_skyt(a, i, b)?;
    // the positive form needs a genuine shape; degenerate triples only have
    // the conventional value
    let positive = match method {
        Method::Alt => None,
        _ if degenerate => None,
        _ => Some(tableaux::count_skyt_positive(a, i, b)?),
    };
    let fillings = if enumerate { Some(tableaux::enumerate_skyt_with_cap(a, i, b, cap)?) } else { None };
    let enumerated = fillings.as_ref().map(|f| BigInt::from(f.len()));

    let count = match method {
        Method::Positive => positive.clone().unwrap_or_else(|| alternating.clone()),
        _ => alternating.clone(),
    };
    let mut disagreements = Vec::new();
    if let Some(p) = &positive {
        if *p != alternating {
            disagreements.push(format!("positive {p} vs alternating {alternating}"));
        }
    }
    if let Some(e) = &enumerated {
        if *e != count {
            disagreements.push(format!("enumerated {e} vs formula {count}"));
        }
    }

    let mut table = Table::new(&["a", "i", "b", "method", "count"]);
    let mut text = String::new();
    if method != Method::Positive || degenerate {
        table.push([a.to_string(), i.to_string(), b.to_string(), "alternating".into(), alternating.to_string()]);
        text.push_str(&format!("skyt({a},{i},{b}) = {alternating} (alternating)\n"));
    }
    if let Some(p) = &positive {
        table.push([a.to_string(), i.to_string(), b.to_string(), "positive".into(), p.to_string()]);
        text.push_str(&format!("skyt({a},{i},{b}) = {p} (positive)\n"));
    }
    if let Some(e) = &enumerated {
        table.push([a.to_string(), i.to_string(), b.to_string(), "enumeration".into(), e.to_string()]);
        text.push_str(&format!("skyt({a},{i},{b}) = {e} (enumeration)\n"));
        for f in fillings.iter().flatten() {
            text.push_str(&format!("  {}\n", filling_json(f)));
        }
    }
    Ok(Outcome {
        inputs: json!({ "a": a, "i": i, "b": b, "enumerate": enumerate, "method": format!("{method:?}").to_lowercase(), "cap": cap }),
        results: json!({
            "count": num(&count),
            "alternating": num(&alternating),
            "positive": positive.as_ref().map(num),
            "enumerated": enumerated.as_ref().map(num),
            "fillings": fillings.as_ref().map(|fs| fs.iter().map(filling_json).collect::<Vec<_>>()),
        }),
        table,
        text,
        mismatch: (!disagreements.is_empty()).then(|| disagreements.join("; ")),
    })
}

pub fn verify(
    max_ground: u32,
    samples: usize,
    seed: u64,
    execution: Execution,
    corrupt_formula: bool,
) -> Result<Outcome, Failure> {
    let config = VerifyConfig { max_ground, samples, seed, execution };
    let report = if corrupt_formula {
        // deliberately wrong in the linear term whenever there is one
        let corrupt = |m: u32, d: u32, c: u64| {
            let p = sparse_paving::kl_polynomial(m, d, c)?;
            Ok(if d >= 3 { p + IntPolynomial::from_i64s(&[0, 1]) } else { p })
        };
        sweep::verify_with(&config, &corrupt)?
    } else {
        sweep::verify(&config)?
    };
    let count = |check| report.mismatches.iter().filter(|m| m.check == check).count();
    let (kl, chi, rec) = (
        count(sweep::Check::KlPolynomial),
        count(sweep::Check::Characteristic),
        count(sweep::Check::Recurrence),
    );
    let first = report.mismatches.first();
    let witness = first.map(|m| {
        json!({
            "check": format!("{:?}", m.check),
            "instance": ChDocument::from_matroid(&m.matroid),
            "formula": poly(&m.formula),
            "oracle": poly(&m.oracle),
        })
    });
    let mut table = Table::new(&["metric", "value"]);
    for (k, v) in [
        ("instances", report.instances()),
        ("exhaustive", report.exhaustive),
        ("sampled", report.sampled),
        ("with_loops", report.with_loops),
        ("kl_mismatches", kl),
        ("characteristic_mismatches", chi),
        ("recurrence_failures", rec),
    ] {
        table.push([k.to_string(), v.to_string()]);
    }
    let mut text = format!(
        "{} instances ({} exhaustive, {} sampled); KL mismatches {kl}, characteristic mismatches {chi}, recurrence failures {rec}\n",
        report.instances(),
        report.exhaustive,
        report.sampled
    );
    text.push_str(if report.passed() { "pass\n" } else { "FAIL\n" });
    if let Some(w) = &witness {
        text.push_str(&format!("first counterexample: {w}\n"));
    }
    Ok(Outcome {
        inputs: json!({ "max_ground": max_ground, "samples": samples, "seed": seed, "parallel": execution.is_parallel() }),
        results: json!({
            "passed": report.passed(),
            "instances": report.instances(),
            "exhaustive": report.exhaustive,
            "sampled": report.sampled,
            "with_loops": report.with_loops,
            "kl_mismatches": kl,
            "characteristic_mismatches": chi,
            "recurrence_failures": rec,
            "first_counterexample": witness,
        }),
        table,
        text,
        mismatch: first.map(|m| {
            format!("{:?} disagrees on {}", m.check, serde_json::to_string(&ChDocument::from_matroid(&m.matroid)).unwrap())
        }),
    })
}

fn family_json(family: &[Subset]) -> Value {
    json!(family.iter().map(|s| s.to_one_based()).collect::<Vec<_>>())
}

pub fn bounds(m: u32, d: u32, exact: bool) -> Result<Outcome, Failure> {
    if m + d > spkl_core::subset::MAX_GROUND {
        return Err(Failure::Input(format!("m + d = {} exceeds {}", m + d, spkl_core::subset::MAX_GROUND)));
    }
    let report = bounds::report(m, d, exact)?;
    let known = bounds::known_family_bound(m, d);
    let mut table = Table::new(&["m", "d", "coding_bound", "johnson_bound", "best_bound", "known_family_bound", "exact"]);
    table.push([
        m.to_string(),
        d.to_string(),
        report.coding_bound.to_string(),
        report.johnson_bound.to_string(),
        report.best.to_string(),
        known.to_string(),
        report.exact.map(|x| x.to_string()).unwrap_or_default(),
    ]);
    let mut text = format!(
        "coding bound {}, Johnson bound {}, best {}, known-family bound {known}\n",
        report.coding_bound, report.johnson_bound, report.best
    );
    if let (Some(x), Some(w)) = (report.exact, &report.witness) {
        text.push_str(&format!("independence number of J({}, {d}) = {x}, e.g. {}\n", m + d, family_json(w)));
    }
    Ok(Outcome {
        inputs: json!({ "m": m, "d": d, "exact": exact }),
        results: json!({
            "coding_bound": num(&report.coding_bound),
            "johnson_bound": num(&report.johnson_bound),
            "best_bound": num(&report.best),
            "known_family_bound": num(&known),
            "coding_exceeds_johnson": bounds::coding_exceeds_johnson(m, d),
            "exact": report.exact,
            "witness": report.witness.as_deref().map(family_json),
        }),
        table,
        text,
        mismatch: None,
    })
}

/// Parses `lo..hi` / `lo..=hi` (both inclusive) or a single integer.
pub fn parse_range(s: &str) -> Result<RangeInclusive<u32>, String> {
    let parse = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("bad bound {x:?}: {e}"));
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
        None => {
            let x = parse(s)?;
            (x, x)
        }
    };
    if lo > hi {
        return Err(format!("empty range {s:?}"));
    }
    Ok(lo..=hi)
}

pub fn parse_policy(s: &str) -> Result<CPolicy, String> {
    match s {
        "zero" => Ok(CPolicy::Zero),
        "max-bound" => Ok(CPolicy::MaxBound),
        "known-bound" => Ok(CPolicy::KnownBound),
        other => other
            .parse::<u64>()
            .map(CPolicy::Explicit)
            .map_err(|_| format!("expected zero, max-bound, known-bound or an integer, got {other:?}")),
    }
}

pub fn table(
    ms: RangeInclusive<u32>,
    ds: RangeInclusive<u32>,
    policy: CPolicy,
    unchecked: bool,
    execution: Execution,
) -> Result<Outcome, Failure> {
    let rows = sweep::table(ms.clone(), ds.clone(), policy, unchecked, execution)?;
    let mut table = Table::new(&["m", "d", "c", "i", "coefficient"]);
    let mut text = String::new();
    for row in &rows {
        for (i, x) in row.coefficients.iter().enumerate() {
            table.push([row.m.to_string(), row.d.to_string(), row.c.to_string(), i.to_string(), x.to_string()]);
        }
        let coeffs: Vec<String> = row.coefficients.iter().map(|x| x.to_string()).collect();
        text.push_str(&format!("m={:<3} d={:<3} c={:<6} [{}]\n", row.m, row.d, row.c, coeffs.join(", ")));
    }
    let negative = rows.iter().any(|r| r.coefficients.iter().any(|x| *x < BigInt::from(0)));
    let policy_name = match policy {
        CPolicy::Zero => "zero".to_string(),
        CPolicy::MaxBound => "max-bound".to_string(),
        CPolicy::KnownBound => "known-bound".to_string(),
        CPolicy::Explicit(c) => c.to_string(),
    };
    Ok(Outcome {
        inputs: json!({
            "m_range": [ms.start(), ms.end()],
            "d_range": [ds.start(), ds.end()],
            "c": policy_name,
            "unchecked": unchecked,
        }),
        results: json!({
            "rows": rows.iter().map(|r| json!({
                "m": r.m,
                "d": r.d,
                "c": r.c,
                "coefficients": r.coefficients.iter().map(num).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "any_negative": negative,
        }),
        table,
        text,
        mismatch: None,
    })
}
