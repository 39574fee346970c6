//! Subcommand implementations. Each returns the process exit code and
//! prints machine-readable JSON on stdout, diagnostics on stderr.
//!
//! Exit-code contract: 0 success, 1 I/O failure, 2 schema violation,
//! 3 not *-linear, 4 verification/comparison failure, 5 missing provenance.

use crate::formats::{
    FileError, HillFile, MapFile, decode_matrix, encode_matrix, read_json, to_json_string,
    write_text,
};
use hillrep::error::Error;
use hillrep::hill::{
    BasisStrategy, HillRepresentation, bridge_residuals, build_hill, compare, minimal_rank,
    select_basis,
};
use hillrep::linmap::LinearMatrixMap;
use hillrep::numeric;
use hillrep::structure::analyze_structure;
use hillrep::random_star_linear;
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_NOT_STAR_LINEAR: i32 = 3;
pub const EXIT_VERIFICATION: i32 = 4;
pub const EXIT_MISSING_PROVENANCE: i32 = 5;

fn fail(code: i32, message: &str) -> i32 {
    eprintln!("error: {message}");
    code
}

fn file_fail(err: &FileError) -> i32 {
    fail(err.exit_code(), err.message())
}

fn core_error_code(err: &Error) -> i32 {
    match err {
        Error::NotStarLinear { .. } => EXIT_NOT_STAR_LINEAR,
        Error::MissingProvenance => EXIT_MISSING_PROVENANCE,
        Error::DifferentMaps { .. } => EXIT_VERIFICATION,
        Error::KernelMismatch(_) => EXIT_VERIFICATION,
        Error::BiorthogonalityViolation(_) => EXIT_VERIFICATION,
        _ => EXIT_SCHEMA,
    }
}

fn emit(text: &str, out: Option<&str>) -> Result<(), FileError> {
    match out {
        Some(path) => write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_map(path: &str) -> Result<(LinearMatrixMap, MapFile), FileError> {
    let file: MapFile = read_json(path)?;
    let map = file.into_map()?;
    Ok((map, file))
}

#[derive(Serialize)]
struct AnalyzeReport {
    star_linear: bool,
    hermitian_choi: bool,
    shuffle_identity: bool,
    m: usize,
    choi_eigenvalues: Vec<f64>,
}

pub fn cmd_analyze(map_path: &str, tol: f64) -> i32 {
    let (map, _) = match load_map(map_path) {
        Ok(v) => v,
        Err(e) => return file_fail(&e),
    };
    let choi = map.choi();
    let hermitian_choi = map.choi_hermitian_deviation() <= tol;
    let shuffle_identity = map.shuffle_identity_deviation() <= tol;
    // eigenvalues of the Hermitian part; for *-linear maps this is the Choi
    // spectrum itself, reported for information only
    let herm = choi.matrix().hermitian_part().expect("square");
    let choi_eigenvalues = match numeric::hermitian_eigenvalues(&herm) {
        Ok(v) => v,
        Err(e) => return fail(EXIT_SCHEMA, &e.to_string()),
    };
    let report = AnalyzeReport {
        star_linear: hermitian_choi && shuffle_identity,
        hermitian_choi,
        shuffle_identity,
        m: minimal_rank(&map, tol),
        choi_eigenvalues,
    };
    print!("{}", to_json_string(&report));
    EXIT_OK
}

pub fn cmd_hill(map_path: &str, strategy: &str, tol: f64, out: Option<&str>) -> i32 {
    let (map, map_file) = match load_map(map_path) {
        Ok(v) => v,
        Err(e) => return file_fail(&e),
    };
    let strat = match strategy {
        "blocks" => BasisStrategy::Blocks,
        "qr" => BasisStrategy::Qr,
        other => return fail(EXIT_SCHEMA, &format!("unknown strategy {other:?}")),
    };
    let rep = match select_basis(&map, strat, tol).and_then(|basis| build_hill(&map, &basis, tol))
    {
        Ok(rep) => rep,
        Err(e) => return fail(core_error_code(&e), &e.to_string()),
    };
    let _ = map_file;
    let file = HillFile::from_representation(&rep, tol);
    match emit(&to_json_string(&file), out) {
        Ok(()) => EXIT_OK,
        Err(e) => file_fail(&e),
    }
}

#[derive(Serialize)]
struct VerifyReport {
    pass: bool,
    residuals: VerifyResiduals,
}

#[derive(Serialize)]
struct VerifyResiduals {
    reconstruction_rel: f64,
    h_hermitian_rel: f64,
    h_sigma_ratio: f64,
    a_independence_sigma_ratio: f64,
}

pub fn cmd_verify(map_path: &str, rep_path: &str, tol: f64) -> i32 {
    let (map, _) = match load_map(map_path) {
        Ok(v) => v,
        Err(e) => return file_fail(&e),
    };
    let rep_file: HillFile = match read_json(rep_path) {
        Ok(v) => v,
        Err(e) => return file_fail(&e),
    };
    let rep = match rep_file.into_representation() {
        Ok(v) => v,
        Err(e) => return file_fail(&e),
    };
    if (rep.n(), rep.q()) != (map.n(), map.q()) {
        return fail(
            EXIT_VERIFICATION,
            &format!(
                "representation is for a ({}, {}) map, file carries ({}, {})",
                rep.n(),
                rep.q(),
                map.n(),
                map.q()
            ),
        );
    }
    let rec = rep.reconstruct();
    let scale = map
        .matricization()
        .frobenius_norm()
        .max(f64::MIN_POSITIVE);
    let reconstruction_rel =
        (rec.matricization() - map.matricization()).frobenius_norm() / scale;
    let hnorm = rep.h().frobenius_norm().max(f64::MIN_POSITIVE);
    let h_hermitian_rel = rep.h().hermitian_deviation() / hnorm;
    let (hmin, hmax) = numeric::sigma_extremes(rep.h());
    let h_sigma_ratio = if rep.m() == 0 {
        1.0
    } else if hmax == 0.0 {
        0.0
    } else {
        hmin / hmax
    };
    let (ahat, _) = rep.stacked_forms();
    let (amin, amax) = numeric::sigma_extremes(&ahat);
    let a_independence_sigma_ratio = if rep.m() == 0 {
        1.0
    } else if amax == 0.0 {
        0.0
    } else {
        amin / amax
    };
    let pass = reconstruction_rel <= tol
        && h_hermitian_rel <= tol
        && h_sigma_ratio > tol
        && a_independence_sigma_ratio > tol;
    let report = VerifyReport {
        pass,
        residuals: VerifyResiduals {
            reconstruction_rel,
            h_hermitian_rel,
            h_sigma_ratio,
            a_independence_sigma_ratio,
        },
    };
    print!("{}", to_json_string(&report));
    if pass { EXIT_OK } else { EXIT_VERIFICATION }
}

#[derive(Serialize)]
struct CompareReport {
    #[serde(rename = "Phi")]
    phi: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "Xi")]
    xi: Vec<Vec<[f64; 2]>>,
    residuals: CompareResiduals,
}

#[derive(Serialize)]
struct CompareResiduals {
    #[serde(rename = "H_PhiHpPhiStar")]
    h_phi_hp_phi_star: f64,
    #[serde(rename = "Xi_PhiHp")]
    xi_phi_hp: f64,
    #[serde(rename = "H_PhiXiStar")]
    h_phi_xi_star: f64,
    #[serde(rename = "Lhat_rel")]
    lhat_rel: f64,
    #[serde(rename = "Ahat_rel")]
    ahat_rel: f64,
}

fn load_representation(path: &str) -> Result<HillRepresentation, FileError> {
    let file: HillFile = read_json(path)?;
    file.into_representation()
}

pub fn cmd_compare(rep_a_path: &str, rep_b_path: &str, tol: f64) -> i32 {
    let rep_a = match load_representation(rep_a_path) {
        Ok(v) => v,
        Err(e) => return file_fail(&e),
    };
    let rep_b = match load_representation(rep_b_path) {
        Ok(v) => v,
        Err(e) => return file_fail(&e),
    };
    let bridge = match compare(&rep_a, &rep_b, tol.max(1e-9)) {
        Ok(v) => v,
        Err(e) => return fail(core_error_code(&e), &e.to_string()),
    };
    let res = match bridge_residuals(&rep_a, &rep_b, &bridge) {
        Ok(v) => v,
        Err(e) => return fail(core_error_code(&e), &e.to_string()),
    };
    let report = CompareReport {
        phi: encode_matrix(&bridge.phi),
        xi: encode_matrix(&bridge.xi),
        residuals: CompareResiduals {
            h_phi_hp_phi_star: res.h_phi_hp_phi_star,
            xi_phi_hp: res.xi_phi_hp,
            h_phi_xi_star: res.h_phi_xi_star,
            lhat_rel: res.lhat_rel,
            ahat_rel: res.ahat_rel,
        },
    };
    print!("{}", to_json_string(&report));
    EXIT_OK
}

pub fn cmd_convert(map_path: &str, to: &str, out: Option<&str>) -> i32 {
    let (map, file) = match load_map(map_path) {
        Ok(v) => v,
        Err(e) => return file_fail(&e),
    };
    let representation = match to {
        "choi" | "matricization" => to,
        other => return fail(EXIT_SCHEMA, &format!("unknown representation {other:?}")),
    };
    let converted = MapFile::from_map(&map, representation, &file.field);
    match emit(&to_json_string(&converted), out) {
        Ok(()) => EXIT_OK,
        Err(e) => file_fail(&e),
    }
}

pub fn cmd_random(n: usize, q: usize, rank: usize, seed: u64, out: Option<&str>) -> i32 {
    let map = match random_star_linear(n, q, rank, seed) {
        Ok(v) => v,
        Err(e) => return fail(EXIT_SCHEMA, &e.to_string()),
    };
    let file = MapFile::from_map(&map, "matricization", "complex");
    match emit(&to_json_string(&file), out) {
        Ok(()) => EXIT_OK,
        Err(e) => file_fail(&e),
    }
}

#[derive(Serialize)]
struct StructureJson {
    star_linear: bool,
    block_patterns: Vec<String>,
    entry_patterns: Vec<String>,
    duality_consistent: bool,
}

pub fn cmd_structure(map_path: &str, tol: f64) -> i32 {
    let (map, _) = match load_map(map_path) {
        Ok(v) => v,
        Err(e) => return file_fail(&e),
    };
    let report = match analyze_structure(&map, tol) {
        Ok(v) => v,
        Err(e) => return fail(core_error_code(&e), &e.to_string()),
    };
    let json = StructureJson {
        star_linear: report.star_linear,
        block_patterns: report.block_patterns.iter().map(|p| p.name().to_string()).collect(),
        entry_patterns: report.entry_patterns.iter().map(|p| p.name().to_string()).collect(),
        duality_consistent: report.duality_consistent,
    };
    print!("{}", to_json_string(&json));
    EXIT_OK
}

#[derive(Serialize)]
struct ApplyReport {
    result: Vec<Vec<[f64; 2]>>,
}

pub fn cmd_apply(map_path: &str, matrix_path: &str, out: Option<&str>) -> i32 {
    let (map, _) = match load_map(map_path) {
        Ok(v) => v,
        Err(e) => return file_fail(&e),
    };
    let data: Vec<Vec<[f64; 2]>> = match read_json(matrix_path) {
        Ok(v) => v,
        Err(e) => return file_fail(&e),
    };
    let v = match decode_matrix(&data, map.q(), map.q(), "argument matrix") {
        Ok(v) => v,
        Err(e) => return file_fail(&e),
    };
    let image = match map.apply(&v) {
        Ok(v) => v,
        Err(e) => return fail(EXIT_SCHEMA, &e.to_string()),
    };
    let report = ApplyReport { result: encode_matrix(&image) };
    match emit(&to_json_string(&report), out) {
        Ok(()) => EXIT_OK,
        Err(e) => file_fail(&e),
    }
}
