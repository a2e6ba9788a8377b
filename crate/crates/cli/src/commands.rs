use std::io::Read as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use posmap_core::uniqueness::{epsilon_candidate, Alternate, SEARCH_TOL};
use posmap_core::{
    block_positive, build_extremal, canonical_ccp_conditions, canonical_cp_conditions, ccp_check,
    cp_check, decompose_extremal, degenerate_case, epsilon_family, example_family,
    face_form_inequalities, face_membership, feasibility, uniqueness_search, validate_extremal,
    verify_decomposition, BlochGrid, Branch, Certificate64, ChoiMat64, DegenerateCase, Error,
    ExtremalParams64, Real, SearchConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::parse;
use crate::{CertifyArgs, DecomposeArgs, DegenerateKind, ExploreArgs, GenerateArgs, Outcome};

/// Lower bound on `|y|` and `|z|` for random decomposition instances.
const RANDOM_FLOOR: f64 = 1e-3;

fn default_tol() -> f64 {
    <f64 as Real>::default_tol()
}

fn read_input(path: &Path) -> Result<(Vec<u8>, String)> {
    let mut bytes = Vec::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_end(&mut bytes).context("cannot read stdin")?;
    } else {
        bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    }
    let digest = hex::encode(Sha256::digest(&bytes));
    Ok((bytes, digest))
}

fn to_value<S: serde::Serialize>(x: &S) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn params_json(p: &ExtremalParams64) -> Value {
    json!({
        "u": p.u,
        "y": p.y,
        "z": p.z,
        "t_branch": p.t_branch,
        "b": p.b(),
        "t": p.t(),
    })
}

pub fn generate(a: &GenerateArgs, tol: Option<f64>) -> Result<Outcome> {
    let tol = tol.unwrap_or_else(default_tol);
    let need = |v: &Option<String>, flag: &str| -> Result<_> {
        match v {
            Some(s) => parse::complex(s).with_context(|| format!("--{flag}")),
            None => bail!("--{flag} is required here"),
        }
    };
    let mut input_sha256 = None;
    let (source, params, h) = if let Some(s) = a.example_s {
        let params = ExtremalParams64::example(s)?;
        (json!({"kind": "example", "s": s}), Some(params), example_family(s)?)
    } else if let Some(kind) = a.degenerate {
        let case = match kind {
            DegenerateKind::UZero => DegenerateCase::UZero,
            DegenerateKind::YZero => DegenerateCase::YZero { z: need(&a.z, "z")? },
            DegenerateKind::ZZero => DegenerateCase::ZZero { y: need(&a.y, "y")? },
        };
        let h = degenerate_case(case)?;
        (json!({"kind": "degenerate", "case": case}), None, h)
    } else if let Some(path) = &a.params {
        let (bytes, digest) = read_input(path)?;
        input_sha256 = Some(digest);
        let params: ExtremalParams64 = serde_json::from_slice(&bytes).context("malformed parameter JSON")?;
        params.validate(tol)?;
        (json!({"kind": "params_file"}), Some(params), build_extremal(&params)?)
    } else if let Some(u) = a.u {
        let branch = if a.t_branch == "-" { Branch::Minus } else { Branch::Plus };
        let params = ExtremalParams64::new(u, need(&a.y, "y")?, need(&a.z, "z")?, branch)?;
        (json!({"kind": "params"}), Some(params), build_extremal(&params)?)
    } else {
        bail!("one of --example-s, --u/--y/--z, --degenerate or --params is required");
    };
    let certificate = validate_extremal(&h, tol)?;
    Ok(Outcome {
        pass: certificate.is_pass(),
        result: json!({
            "source": source,
            "params": params.as_ref().map(params_json),
            "matrix": h,
            "certificate": certificate,
        }),
        tol,
        input_sha256,
        seed: None,
    })
}

pub fn certify(a: &CertifyArgs, tol: Option<f64>) -> Result<Outcome> {
    let tol = tol.unwrap_or_else(default_tol);
    let (bytes, digest) = read_input(&a.matrix)?;
    let h = parse::matrix(&bytes)?;
    if !h.is_hermitian(tol) {
        return Err(Error::NotHermitian {
            residual: h.as_mat4().hermiticity_residual(),
        }
        .into());
    }
    let none_selected = !(a.positive
        || a.cp
        || a.ccp
        || a.face
        || a.canonical_cp
        || a.canonical_ccp
        || a.face_form
        || a.extremal);
    let mut certs: Vec<(&str, Certificate64)> = Vec::new();
    if a.positive || none_selected {
        certs.push(("positive", block_positive(&h, BlochGrid::default(), tol)?));
    }
    if a.cp || none_selected {
        certs.push(("cp", cp_check(&h, tol)?));
    }
    if a.ccp || none_selected {
        certs.push(("ccp", ccp_check(&h, tol)?));
    }
    if a.face {
        let xi = parse::vector2(&a.xi).context("--xi")?;
        let eta = parse::vector2(&a.eta).context("--eta")?;
        certs.push(("face", face_membership(&h, &xi, &eta, tol)));
    }
    if a.canonical_cp {
        certs.push(("canonical_cp", canonical_cp_conditions(&h, tol)?));
    }
    if a.canonical_ccp {
        certs.push(("canonical_ccp", canonical_ccp_conditions(&h, tol)?));
    }
    if a.face_form {
        certs.push(("face_form", face_form_inequalities(&h, tol)?));
    }
    if a.extremal {
        certs.push(("extremal", validate_extremal(&h, tol)?));
    }
    let pass = certs.iter().all(|(_, c)| c.is_pass());
    let mut map = Map::new();
    for (name, cert) in &certs {
        map.insert(name.to_string(), to_value(cert)?);
    }
    Ok(Outcome {
        result: json!({"matrix": h, "certificates": map}),
        pass,
        tol,
        input_sha256: Some(digest),
        seed: None,
    })
}

pub fn decompose(a: &DecomposeArgs, tol: Option<f64>, seed: Option<u64>) -> Result<Outcome> {
    let tol = tol.unwrap_or_else(default_tol);
    let (h, source, input_sha256, seed) = match &a.matrix {
        Some(path) => {
            let (bytes, digest) = read_input(path)?;
            (parse::matrix(&bytes)?, json!({"kind": "file"}), Some(digest), None)
        }
        None => {
            let seed = seed.unwrap_or(0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let params = ExtremalParams64::sample(&mut rng, RANDOM_FLOOR);
            (build_extremal(&params)?, json!({"kind": "random"}), None, Some(seed))
        }
    };
    let params = ExtremalParams64::from_choi(&h, tol)?;
    let pair = decompose_extremal(&h, tol)?;
    let certificate = verify_decomposition(&h, &pair, tol);
    let mut result = json!({
        "source": source,
        "params": params_json(&params),
        "matrix": h,
    });
    let obj = result.as_object_mut().expect("object literal");
    if let Value::Object(parts) = to_value(&pair)? {
        obj.extend(parts);
    }
    obj.insert("certificate".into(), to_value(&certificate)?);
    Ok(Outcome {
        pass: certificate.is_pass(),
        result,
        tol,
        input_sha256,
        seed,
    })
}

pub fn explore(a: &ExploreArgs, tol: Option<f64>, seed: Option<u64>) -> Result<Outcome> {
    let tol = tol.unwrap_or(SEARCH_TOL);
    let seed = seed.unwrap_or(0);
    let (bytes, digest) = read_input(&a.matrix)?;
    let h = parse::matrix(&bytes)?;
    let config = SearchConfig {
        radius: a.radius,
        resolution: a.resolution,
        samples: a.samples,
        seed,
        tol,
        max_listed: a.max_listed,
    };
    let mut report = uniqueness_search(&h, &config)?;
    let unique = report.search_meta.unique_hypotheses;
    let (epsilon, epsilon_ok) = if unique {
        (Value::Null, true)
    } else {
        epsilon_member(&h, a.eps, tol, &mut report)?
    };
    let pass = report.canonical_feasible && epsilon_ok && (!unique || report.alternates_total == 0);
    let mut result = to_value(&report)?;
    result
        .as_object_mut()
        .expect("struct serializes to an object")
        .insert("epsilon_family".into(), epsilon);
    let mut full = json!({"matrix": h});
    full.as_object_mut()
        .expect("object literal")
        .extend(result.as_object().cloned().unwrap_or_default());
    Ok(Outcome {
        result: full,
        pass,
        tol,
        input_sha256: Some(digest),
        seed: Some(seed),
    })
}

/// Builds the ε-family member for a degenerate input and, when feasible and
/// distinct from the reference, lists it among the alternates (in addition
/// to at most `max_listed` search hits).
fn epsilon_member(
    h: &ChoiMat64,
    eps: f64,
    tol: f64,
    report: &mut posmap_core::FeasibilityReport64,
) -> Result<(Value, bool)> {
    let (rest, a_eps) = match epsilon_family(h, eps, tol) {
        Ok(parts) => parts,
        Err(Error::NotDegenerate) => return Ok((Value::Null, true)),
        Err(e @ Error::EpsilonTooLarge { .. }) => return Ok((json!({"eps": eps, "error": e.to_string()}), false)),
        Err(e) => return Err(e.into()),
    };
    let candidate = epsilon_candidate(h, eps, tol)?;
    let distance = candidate.distance(&report.canonical);
    let cert = feasibility(h, &candidate, tol)?;
    if cert.is_pass() && distance > tol {
        report.alternates_total += 1;
        let at = report.alternates_found.partition_point(|x| x.distance >= distance);
        report.alternates_found.insert(at, Alternate { candidate, distance });
    }
    Ok((
        json!({
            "eps": eps,
            "h_minus_a_eps": rest,
            "a_eps": a_eps,
            "candidate": candidate,
            "distance": distance,
            "feasibility": cert,
        }),
        cert.is_pass(),
    ))
}
