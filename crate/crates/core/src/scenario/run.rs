use rayon::prelude::*;
use serde_json::json;

use super::literal::{parse_matrix, ScenarioScalar};
use super::report::{Check, Report, Status};
use super::spec::{
    parse_builtin, parse_scenario, ActionSection, CoproductSpec, GadgetSpec, HopfSection, KindSpec, MagicSection,
    MapSpec, Mode, Scenario, SystemSection,
};
use super::ScenarioError;
use crate::algebra::{verify_star_hom, Coords, LinearMap, MultiMatrixAlgebra};
use crate::error::Result as CoreResult;
use crate::hopf::{
    check_action, check_classical_formulas, check_corner_surjection, check_hopf, check_hopf_system,
    classical_generator, classical_grid, classical_hopf_maps, classical_quantum_permutation_algebra, classical_tower,
    coproduct_concrete, flip, limit_action, limit_hopf, padded_permutation_action, perturbed_classical_coproduct,
    verify_hopf, HopfData, HopfMaps, LawCheck, SymmetricGroup,
};
use crate::linalg::{range_projection, Approx, Exact, Field, Mat, DEFAULT_TOLERANCE};
use crate::magic::{
    carrier_certificate, comultiply_grid, corner_embed, corner_restrict, gadget_append, pad_to, block_unitary,
    verify_magic, GridKind, MagicUnitary,
};
use crate::projective::{build_truncated_limit, decompose_system, ProjectiveSystem};

const SYSTEM: &str = "φ_n: M_{n+1} → M_n surjective normal *-homomorphisms";
const DECOMPOSE: &str = "M_n = ⊕_{k=1}^n B_k";
const LIMIT: &str = "M_∞ = {(m_n) : φ_n(m_{n+1}) = m_n}";
const HOPF: &str = "(id_M ⊗ Δ)Δ = (Δ ⊗ id_M)Δ";
const COUNIT: &str = "(ε ⊗ id)Δ = (id ⊗ ε)Δ = id";
const ANTIPODE: &str = "involutive *-antihomomorphism κ";
const CLASSICAL: &str = "Δ_n(p_ij) = Σ_{k=1}^n p_ik ⊗ p_kj, ε_n(p_ij) = δ_ij, κ_n(p_ij) = p_ji";
const CORNER: &str = "[P 0; 0 1] → P";
const HOPF_SYSTEM: &str = "(φ_n ⊗ φ_n)Δ_{n+1} = Δ_n φ_n";
const COP: &str = "Δ_n ψ_n = (ψ_n ⊗ ψ_n)Δ";
const ACTION: &str = "(id_W ⊗ Δ)α = (α ⊗ id_M)α";
const LIMIT_ACTION: &str = "(id_W ⊗ ψ_n)α = α_n";
const BPROJ: &str = "b_ij = b_ij* = b_ij²";
const BPROD: &str = "b_ij b_ik = 0";
const PARTIAL: &str = "p_i^{(n)} := Σ_{j=1}^n b_ij is an increasing family of projections";
const INFPERM: &str = "Σ_j π(q_ij) = Σ_j π(q_ji) = 1";
const GENERATE: &str = "the entries generate B(H) as a von Neumann algebra";
const TRANSPOSE: &str = "κ_A(q_ij) = q_ji";
const COMULTIPLY: &str = "x_ij := Σ_k q_ik ⊗ q_kj";
const PAD: &str = "b^{(n)}_{ij} = 0 otherwise";
const GADGET: &str = "two by two blocks of the form [[t_n, t_n⊥],[t_n⊥, t_n]]";
const CARRIER: &str = "z((p_j^{(n)})^⊥)";
const CARRIER_NOTE: &str = "separating the two limits needs infinitely many orthogonal nonzero projections; \
this is the finite ingredient only";
const INSTANCE: &str = " (instance verification)";

/// Overrides that come from outside the scenario file.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub mode: Option<Mode>,
    pub tol: Option<f64>,
    /// Value of `MAGICLIM_MODE`, if set.
    pub env_mode: Option<String>,
}

/// Precedence: explicit option, then the scenario, then the environment;
/// without any of them decimal literals select float mode.
pub fn resolve_mode(opts: &RunOptions, s: &Scenario, decimals: bool) -> Result<(Mode, f64), ScenarioError> {
    let env = opts.env_mode.as_deref().map(str::parse::<Mode>).transpose()?;
    let mode = opts.mode.or(s.mode).or(env).unwrap_or(if decimals { Mode::Float } else { Mode::Exact });
    let tol = opts.tol.or(s.tol).unwrap_or(DEFAULT_TOLERANCE);
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(input("tol", format!("tolerance must be a nonnegative number, got {tol}")));
    }
    Ok((mode, tol))
}

pub fn run_scenario_text(text: &str, opts: &RunOptions) -> Result<Report, ScenarioError> {
    let (scenario, decimals) = parse_scenario(text)?;
    run_scenario(&scenario, decimals, opts)
}

pub fn run_scenario(s: &Scenario, decimals: bool, opts: &RunOptions) -> Result<Report, ScenarioError> {
    let (mode, tol) = resolve_mode(opts, s, decimals)?;
    let mut checks = match mode {
        Mode::Exact => collect_checks::<Exact>(s, tol)?,
        Mode::Float => collect_checks::<Approx>(s, tol)?,
    };
    for (i, e) in s.expectations.iter().enumerate() {
        let check = checks
            .iter_mut()
            .find(|c| c.id == e.check)
            .ok_or_else(|| input(&format!("expectations[{i}].check"), format!("no check with id \"{}\"", e.check)))?;
        check.expected = Some(e.expected);
    }
    Ok(Report::new(s.name.clone(), checks))
}

type Section<'a> = Box<dyn Fn() -> Result<Vec<Check>, ScenarioError> + Send + Sync + 'a>;

fn collect_checks<F: ScenarioScalar>(s: &Scenario, tol: f64) -> Result<Vec<Check>, ScenarioError> {
    let large = s.allow_large;
    let mut sections: Vec<Section<'_>> = Vec::new();
    if let Some(sec) = &s.system {
        sections.push(Box::new(move || system_checks::<F>(sec, large, tol)));
    }
    if let Some(sec) = &s.hopf {
        sections.push(Box::new(move || hopf_checks::<F>(sec, large, tol)));
    }
    if let Some(sec) = &s.action {
        let hopf = s.hopf.as_ref();
        sections.push(Box::new(move || action_checks::<F>(sec, hopf, large, tol)));
    }
    if let Some(sec) = &s.magic {
        sections.push(Box::new(move || magic_checks::<F>(sec, large, tol)));
    }
    let results: Vec<_> = sections.par_iter().map(|f| f()).collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}

fn input(path: &str, message: impl Into<String>) -> ScenarioError {
    ScenarioError::Input { path: path.to_string(), message: message.into() }
}

fn outcome_row(id: impl Into<String>, description: impl Into<String>, anchor: &str, r: CoreResult<()>) -> Check {
    match r {
        Ok(()) => Check::new(id, description, anchor, Status::Pass),
        Err(e) => Check::new(id, description, anchor, Status::Fail).with_witness(e.to_string()),
    }
}

fn instance(description: &str) -> String {
    format!("{description}{INSTANCE}")
}

/// Rows for a list of law checks; those about the limit are marked as
/// checks of one finite instance.
fn law_rows(prefix: &str, anchor: impl Fn(&str) -> &'static str, checks: Vec<LawCheck>) -> Vec<Check> {
    let suffix = if prefix.ends_with(".limit") || prefix == "hopf.system" { INSTANCE } else { "" };
    checks
        .into_iter()
        .map(|c| {
            let a = anchor(&c.id);
            outcome_row(format!("{prefix}.{}", c.id), format!("{}{suffix}", c.law), a, c.outcome)
        })
        .collect()
}

fn hopf_anchor(slug: &str) -> &'static str {
    if slug.starts_with("counit") {
        COUNIT
    } else if slug.starts_with("antipode") {
        ANTIPODE
    } else {
        HOPF
    }
}

fn limit_anchor(slug: &str) -> &'static str {
    if slug.starts_with("cop") || slug.starts_with("coproduct") {
        COP
    } else {
        hopf_anchor(slug)
    }
}

fn size_guard(n: usize, large: bool, path: &str) -> Result<(), ScenarioError> {
    match n {
        0 => Err(input(path, "n must be at least 1")),
        1..=4 => Ok(()),
        5 if large => Ok(()),
        5 => Err(input(path, "n = 5 needs \"allow_large\": true")),
        _ => Err(input(path, format!("n = {n} is beyond the supported range (≤ 5)"))),
    }
}

fn classical_n(s: &str, large: bool, path: &str) -> Result<usize, ScenarioError> {
    let n = parse_builtin(s, "classical", 1, path)?[0];
    size_guard(n, large, path)?;
    Ok(n)
}

fn algebra(dims: &[usize], path: &str) -> Result<MultiMatrixAlgebra, ScenarioError> {
    MultiMatrixAlgebra::new(dims.to_vec()).map_err(|e| input(path, e.to_string()))
}

fn build_map<F: ScenarioScalar>(
    spec: &MapSpec,
    source: &MultiMatrixAlgebra,
    target: &MultiMatrixAlgebra,
    tol: f64,
    path: &str,
) -> Result<LinearMap<F>, ScenarioError> {
    match (&spec.block_map, &spec.matrix) {
        (Some(sigma), None) => {
            let unitaries = spec
                .unitaries
                .as_ref()
                .map(|us| {
                    us.iter()
                        .enumerate()
                        .map(|(j, u)| parse_matrix::<F>(u, tol, &format!("{path}.unitaries[{j}]")))
                        .collect::<Result<Vec<_>, _>>()
                })
                .transpose()?;
            LinearMap::from_block_map(source.clone(), target.clone(), sigma, unitaries.as_deref())
                .map_err(|e| input(&format!("{path}.block_map"), e.to_string()))
        }
        (None, Some(m)) => {
            let path = format!("{path}.matrix");
            let m = parse_matrix::<F>(m, tol, &path)?;
            LinearMap::from_matrix(source.clone(), target.clone(), &m).map_err(|e| input(&path, e.to_string()))
        }
        _ => Err(input(path, "give exactly one of block_map or matrix")),
    }
}

fn system_checks<F: ScenarioScalar>(sec: &SystemSection, large: bool, tol: f64) -> Result<Vec<Check>, ScenarioError> {
    let system = match (&sec.builtin, &sec.algebras) {
        (Some(b), None) => {
            let n = classical_n(b, large, "system.builtin")?;
            classical_tower::<F>(n).map(|(s, _)| s)
        }
        (None, Some(dims)) => {
            let algebras = dims
                .iter()
                .enumerate()
                .map(|(i, d)| algebra(d.dims(), &format!("system.algebras[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            if sec.maps.len() + 1 != algebras.len() {
                return Err(input(
                    "system.maps",
                    format!("{} algebras need {} connecting maps, got {}", algebras.len(), algebras.len().saturating_sub(1), sec.maps.len()),
                ));
            }
            let maps = sec
                .maps
                .iter()
                .enumerate()
                .map(|(i, m)| build_map::<F>(m, &algebras[i + 1], &algebras[i], tol, &format!("system.maps[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            ProjectiveSystem::new(algebras, maps)
        }
        _ => return Err(input("system", "give exactly one of builtin or algebras")),
    };
    let desc = "each φ_n is a surjective *-homomorphism";
    let system = match system {
        Ok(s) => s,
        Err(e) => return Ok(vec![outcome_row("system.connecting", desc, SYSTEM, Err(e))]),
    };
    let mut rows = vec![Check::new("system.connecting", desc, SYSTEM, Status::Pass)];

    match decompose_system(&system) {
        Ok(d) => {
            let blocks: Vec<Vec<usize>> = d.blocks().iter().map(|b| b.block_dims().to_vec()).collect();
            let kernels: Vec<Vec<usize>> =
                (2..=system.depth()).map(|n| d.r(n).support().iter().copied().collect()).collect();
            rows.push(
                Check::new("system.decompose", "M_n ≅ B_1 ⊕ … ⊕ B_n with B_n = r_n M_n", DECOMPOSE, Status::Pass)
                    .with_details(json!({ "b_dims": d.block_dims(), "b_blocks": blocks, "r_supports": kernels })),
            );
        }
        Err(e) => {
            rows.push(outcome_row("system.decompose", "M_n ≅ B_1 ⊕ … ⊕ B_n", DECOMPOSE, Err(e)));
            return Ok(rows);
        }
    }
    let t = match build_truncated_limit(&system) {
        Ok(t) => t,
        Err(e) => {
            rows.push(outcome_row("system.limit", "truncated limit", LIMIT, Err(e)));
            return Ok(rows);
        }
    };
    rows.push(outcome_row("system.limit.sections", instance("ψ_n ι_n = id and ι_n ψ_n = z_n"), LIMIT, t.verify_sections()));
    rows.push(outcome_row("system.limit.iotas", instance("ι_n φ_n = z_n ι_{n+1}"), LIMIT, t.verify_iota_lemma()));
    rows.push(outcome_row(
        "system.limit.compatible",
        instance("limit ≅ compatible sequences (m_n) with φ_n(m_{n+1}) = m_n"),
        LIMIT,
        t.verify_compatible_sequences(),
    ));
    let top = t.psi(t.depth());
    rows.push(
        Check::new(
            "system.limit.psi_top",
            format!("ψ_{} is an isomorphism onto M_{}{INSTANCE}", t.depth(), t.depth()),
            LIMIT,
            Status::from_ok(top.is_injective() && top.is_surjective()),
        )
        .with_details(json!({ "limit_blocks": t.limit_algebra().block_dims() })),
    );
    Ok(rows)
}

/// Structure maps of a single-algebra `hopf` section, with the classical
/// degree when built in and unmodified.
fn single_hopf_maps<F: ScenarioScalar>(
    sec: &HopfSection,
    large: bool,
    tol: f64,
) -> Result<(HopfMaps<F>, Option<usize>, bool), ScenarioError> {
    let (mut maps, n) = match (&sec.builtin, &sec.algebra) {
        (Some(b), None) => {
            let n = classical_n(b, large, "hopf.builtin")?;
            (classical_hopf_maps::<F>(n), Some(n))
        }
        (None, Some(dims)) => {
            let a = algebra(dims.dims(), "hopf.algebra")?;
            let Some(CoproductSpec::Map(spec)) = &sec.coproduct else {
                return Err(input("hopf.coproduct", "an explicit algebra needs an explicit coproduct map"));
            };
            let coproduct = build_map::<F>(spec, &a, &a.tensor(&a), tol, "hopf.coproduct")?;
            let counit = sec
                .counit
                .as_ref()
                .map(|m| build_map::<F>(m, &a, &MultiMatrixAlgebra::scalars(), tol, "hopf.counit"))
                .transpose()?;
            let antipode = sec.antipode.as_ref().map(|m| build_map::<F>(m, &a, &a, tol, "hopf.antipode")).transpose()?;
            return Ok((HopfMaps { algebra: a, coproduct, counit, antipode }, None, false));
        }
        _ => return Err(input("hopf", "give exactly one of builtin, tower or algebra")),
    };
    let mut flipped = false;
    match &sec.coproduct {
        None => {}
        Some(CoproductSpec::Named(name)) if name == "perturbed" => {
            maps.coproduct = perturbed_classical_coproduct(n.expect("builtin"));
        }
        Some(CoproductSpec::Named(name)) if name == "flipped" => {
            maps.coproduct = flip(&maps.algebra).compose(&maps.coproduct).expect("Δ lands in M ⊗ M");
            flipped = true;
        }
        Some(CoproductSpec::Named(other)) => {
            return Err(input("hopf.coproduct", format!("unknown coproduct \"{other}\", expected perturbed or flipped")));
        }
        Some(CoproductSpec::Map(spec)) => {
            let a = maps.algebra.clone();
            maps.coproduct = build_map::<F>(spec, &a, &a.tensor(&a), tol, "hopf.coproduct")?;
        }
    }
    if let Some(m) = &sec.counit {
        maps.counit = Some(build_map::<F>(m, &maps.algebra, &MultiMatrixAlgebra::scalars(), tol, "hopf.counit")?);
    }
    if let Some(m) = &sec.antipode {
        let a = maps.algebra.clone();
        maps.antipode = Some(build_map::<F>(m, &a, &a, tol, "hopf.antipode")?);
    }
    let pristine = sec.coproduct.is_none() && sec.counit.is_none() && sec.antipode.is_none();
    Ok((maps, if pristine { n } else { None }, flipped))
}

fn stage_guard(k: usize, depth: usize, path: &str) -> Result<(), ScenarioError> {
    if k == 0 || k > depth {
        return Err(input(path, format!("stage {k} is outside 1..={depth}")));
    }
    Ok(())
}

/// The classical tower, with the coproduct of one stage perturbed.
fn perturbed_tower<F: Field>(depth: usize, perturb: Option<usize>) -> (ProjectiveSystem<F>, Vec<HopfData<F>>) {
    let (system, mut hopfs) = classical_tower::<F>(depth).expect("classical towers verify");
    if let Some(k) = perturb {
        let h = &hopfs[k - 1];
        let delta = verify_star_hom(perturbed_classical_coproduct(k)).expect("pullbacks are homomorphisms");
        hopfs[k - 1] = HopfData::from_parts(h.algebra().clone(), delta, h.counit().cloned(), h.antipode().cloned());
    }
    (system, hopfs)
}

fn hopf_checks<F: ScenarioScalar>(sec: &HopfSection, large: bool, tol: f64) -> Result<Vec<Check>, ScenarioError> {
    if let Some(tower) = &sec.tower {
        if sec.builtin.is_some() || sec.algebra.is_some() || sec.coproduct.is_some() {
            return Err(input("hopf", "a tower cannot be combined with builtin, algebra or coproduct"));
        }
        let depth = classical_n(tower, large, "hopf.tower")?;
        if let Some(k) = sec.perturb_stage {
            stage_guard(k, depth, "hopf.perturb_stage")?;
        }
        let (system, hopfs) = perturbed_tower::<F>(depth, sec.perturb_stage);
        let mut rows = Vec::new();
        for (n, h) in hopfs.iter().enumerate() {
            rows.extend(law_rows(&format!("hopf.stage_{}", n + 1), hopf_anchor, check_hopf(&h.to_maps())));
        }
        for n in 1..depth {
            rows.extend(law_rows(&format!("hopf.corner_{n}"), |_| CORNER, check_corner_surjection(n, system.phi(n))));
        }
        rows.extend(law_rows("hopf.system", |_| HOPF_SYSTEM, check_hopf_system(&system, &hopfs)));
        match build_truncated_limit(&system).and_then(|t| limit_hopf(&t, &hopfs)) {
            Ok(lh) => rows.extend(law_rows("hopf.limit", limit_anchor, lh.checks)),
            Err(e) => rows.push(outcome_row("hopf.limit", "Hopf structure on the limit", COP, Err(e))),
        }
        return Ok(rows);
    }
    if sec.perturb_stage.is_some() {
        return Err(input("hopf.perturb_stage", "perturb_stage needs a tower"));
    }
    let (maps, classical, flipped) = single_hopf_maps::<F>(sec, large, tol)?;
    let mut rows = law_rows("hopf.verify", hopf_anchor, check_hopf(&maps));
    if flipped {
        let n = parse_builtin(sec.builtin.as_deref().unwrap_or_default(), "classical", 1, "hopf.builtin")?[0];
        let delta = classical_hopf_maps::<F>(n).coproduct;
        let diff = maps.coproduct.first_difference(&delta);
        let mut row = Check::new("hopf.compare.original", "flip ∘ Δ = Δ", HOPF, Status::from_ok(diff.is_none()));
        if let Some(b) = diff {
            row = row.with_witness(format!("images of basis element {b} differ"));
        }
        rows.push(row);
    }
    if let Some(n) = classical {
        if let Ok(h) = verify_hopf(maps) {
            rows.extend(law_rows("hopf.classical", |_| CLASSICAL, check_classical_formulas(n, &h, &classical_grid(n))));
        }
    }
    Ok(rows)
}

fn swap_first_two<F: Field>(alpha: &LinearMap<F>) -> LinearMap<F> {
    let w = alpha.source().clone();
    let swap = LinearMap::from_fn(w.clone(), w, |b| Coords::unit(if b < 2 { 1 - b } else { b })).expect("same algebra");
    alpha.compose(&swap).expect("same source")
}

fn action_checks<F: ScenarioScalar>(
    sec: &ActionSection,
    hopf: Option<&HopfSection>,
    large: bool,
    tol: f64,
) -> Result<Vec<Check>, ScenarioError> {
    if let Some(tower) = &sec.tower {
        let depth = classical_n(tower, large, "action.tower")?;
        let width = sec.width.unwrap_or(depth);
        if width < depth.max(2) && sec.perturb_stage.is_some() || width < depth {
            return Err(input("action.width", format!("width {width} is too small for depth {depth}")));
        }
        if let Some(k) = sec.perturb_stage {
            stage_guard(k, depth, "action.perturb_stage")?;
        }
        let (system, hopfs) = perturbed_tower::<F>(depth, None);
        let alphas: Vec<LinearMap<F>> = (1..=depth)
            .map(|n| {
                let a = padded_permutation_action::<F>(n, width).expect("width checked");
                if sec.perturb_stage == Some(n) {
                    swap_first_two(&a)
                } else {
                    a
                }
            })
            .collect();
        let mut rows = Vec::new();
        for (n, a) in alphas.iter().enumerate() {
            rows.extend(law_rows(&format!("action.stage_{}", n + 1), |_| ACTION, check_action(&hopfs[n], a)));
        }
        let lifted = build_truncated_limit(&system)
            .and_then(|t| limit_hopf(&t, &hopfs).map(|lh| (t, lh)))
            .and_then(|(t, lh)| limit_action(&t, &lh.hopf, &alphas));
        match lifted {
            Ok(la) => rows.extend(law_rows(
                "action.limit",
                |slug| if slug.starts_with("action_") && slug != "action_hom" { LIMIT_ACTION } else { ACTION },
                la.checks,
            )),
            Err(e) => rows.push(outcome_row("action.limit", "action on the limit", LIMIT_ACTION, Err(e))),
        }
        return Ok(rows);
    }
    if sec.perturb_stage.is_some() {
        return Err(input("action.perturb_stage", "perturb_stage needs a tower"));
    }
    let (h, alpha) = match (&sec.builtin, &sec.map) {
        (Some(b), None) => {
            let n = parse_builtin(b, "permutation", 1, "action.builtin")?[0];
            size_guard(n, large, "action.builtin")?;
            let width = sec.width.unwrap_or(n);
            let alpha =
                padded_permutation_action::<F>(n, width).map_err(|e| input("action.width", e.to_string()))?;
            let (h, _) = classical_quantum_permutation_algebra::<F>(n).expect("classical algebras verify");
            (h, alpha)
        }
        (None, Some(spec)) => {
            let hopf = hopf.ok_or_else(|| input("action.map", "an explicit action needs a hopf section"))?;
            if hopf.tower.is_some() {
                return Err(input("action.map", "an explicit action needs a single-algebra hopf section"));
            }
            let carrier = sec.carrier.as_ref().ok_or_else(|| input("action.carrier", "an explicit action needs a carrier"))?;
            let w = algebra(carrier.dims(), "action.carrier")?;
            let (maps, _, _) = single_hopf_maps::<F>(hopf, large, tol)?;
            let alpha = build_map::<F>(spec, &w, &w.tensor(&maps.algebra), tol, "action.map")?;
            match verify_hopf(maps) {
                Ok(h) => (h, alpha),
                Err(e) => {
                    return Ok(vec![outcome_row("action.verify", "the acting Hopf structure verifies", ACTION, Err(e))]);
                }
            }
        }
        _ => return Err(input("action", "give exactly one of builtin, tower or map")),
    };
    Ok(law_rows("action.verify", |_| ACTION, check_action(&h, &alpha)))
}

fn chain_gadgets<F: Field>(d: usize) -> Vec<Mat<F>> {
    (0..d.saturating_sub(1))
        .map(|k| {
            let v = (0..d).map(|i| if i == k || i == k + 1 { F::one() } else { F::zero() }).collect();
            range_projection(&[Mat::column(v)])
        })
        .collect()
}

fn positions<T: std::fmt::Debug>(items: &[T]) -> Option<String> {
    (!items.is_empty()).then(|| format!("{items:?}"))
}

fn relation_rows<F: Field>(u: &MagicUnitary<F>) -> Vec<Check> {
    let r = verify_magic(u);
    let with = |c: Check, w: Option<String>| match w {
        Some(w) => c.with_witness(w),
        None => c,
    };
    let mut rows = vec![
        with(
            Check::new("magic.relations.projections", "every entry is a projection", BPROJ, Status::from_ok(r.projections_hold())),
            positions(&r.not_projections).map(|p| format!("entries (i, j) {p}")),
        ),
        with(
            Check::new(
                "magic.relations.orthogonality",
                "entries sharing a row or column are orthogonal",
                BPROD,
                Status::from_ok(r.orthogonality_holds()),
            ),
            positions(&r.row_overlaps)
                .map(|p| format!("row overlaps (i, j, k) {p}"))
                .or_else(|| positions(&r.col_overlaps).map(|p| format!("column overlaps (j, i, k) {p}"))),
        ),
        with(
            Check::new(
                "magic.relations.partial_sums",
                "row and column partial sums are increasing projections",
                PARTIAL,
                Status::from_ok(r.bad_partial_sums.is_empty()),
            )
            .with_details(json!({ "row_partial_ranks": r.row_partial_ranks, "col_partial_ranks": r.col_partial_ranks })),
            positions(&r.bad_partial_sums),
        ),
    ];
    let description = match r.kind {
        GridKind::Finite => "every row and column sums to the identity".to_string(),
        GridKind::Truncated { declared_infinite } => format!(
            "row and column sums at truncation K = {}{}; defects listed",
            r.size,
            if declared_infinite { " of an infinite grid" } else { "" }
        ),
    };
    rows.push(
        Check::new("magic.relations.sums", description, INFPERM, Status::from_ok(r.sums_exact())).with_details(json!({
            "row_defect_ranks": r.row_defect_ranks,
            "col_defect_ranks": r.col_defect_ranks,
            "row_support": r.row_support,
            "col_support": r.col_support,
        })),
    );
    rows
}

fn magic_checks<F: ScenarioScalar>(sec: &MagicSection, large: bool, tol: f64) -> Result<Vec<Check>, ScenarioError> {
    let mut classical = None;
    let u: MagicUnitary<F> = match (&sec.builtin, &sec.entries) {
        (Some(b), None) if b.starts_with("classical") => {
            let n = classical_n(b, large, "magic.builtin")?;
            classical = Some(n);
            classical_grid(n)
        }
        (Some(b), None) => {
            let v = parse_builtin(b, "paper_block", 2, "magic.builtin")?;
            let (m, k) = (v[0], v[1]);
            if m > 12 {
                return Err(input("magic.builtin", format!("m = {m} is beyond the supported range (≤ 12)")));
            }
            let d: Vec<Mat<F>> = (0..m).map(|i| Mat::unit(m, i, i)).collect();
            block_unitary(&d, k).map_err(|e| input("magic.builtin", e.to_string()))?
        }
        (None, Some(rows)) => {
            let parsed = rows
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    row.iter()
                        .enumerate()
                        .map(|(j, e)| parse_matrix::<F>(e, tol, &format!("magic.entries[{i}][{j}]")))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            let kind = match sec.kind.unwrap_or_default() {
                KindSpec::Finite => GridKind::Finite,
                KindSpec::Truncated => GridKind::Truncated { declared_infinite: sec.declared_infinite },
            };
            MagicUnitary::new(kind, parsed).map_err(|e| input("magic.entries", e.to_string()))?
        }
        _ => return Err(input("magic", "give exactly one of builtin or entries")),
    };
    if let Some(d) = sec.ambient_dim {
        if d != u.ambient_dim() {
            return Err(input("magic.ambient_dim", format!("entries act on ℂ^{}, not ℂ^{d}", u.ambient_dim())));
        }
    }
    let mut rows = Vec::new();
    let u = match &sec.gadgets {
        None => u,
        Some(spec) => {
            let ts = match spec {
                GadgetSpec::Named(name) if name == "chain" => chain_gadgets(u.ambient_dim()),
                GadgetSpec::Named(other) => {
                    return Err(input("magic.gadgets", format!("unknown gadget set \"{other}\", expected chain")));
                }
                GadgetSpec::List(ms) => ms
                    .iter()
                    .enumerate()
                    .map(|(i, m)| parse_matrix::<F>(m, tol, &format!("magic.gadgets[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?,
            };
            match gadget_append(&u, &ts) {
                Ok(g) => {
                    rows.push(
                        Check::new("magic.gadgets", "grid extended by flip gadgets", GADGET, Status::Pass)
                            .with_details(json!({ "gadgets": ts.len(), "size": g.size() })),
                    );
                    classical = None;
                    g
                }
                Err(e) => {
                    rows.push(outcome_row("magic.gadgets", "grid extended by flip gadgets", GADGET, Err(e)));
                    return Ok(rows);
                }
            }
        }
    };
    rows.extend(relation_rows(&u));
    let base = verify_magic(&u).passes();

    for (i, op) in sec.ops.iter().enumerate() {
        let path = format!("magic.ops[{i}]");
        match op.as_str() {
            "generate" => {
                let g = u.ambient();
                rows.push(
                    Check::new("magic.ops.generate", "von Neumann algebra generated by the entries", GENERATE, Status::Pass)
                        .with_details(json!({
                            "ambient_dim": u.ambient_dim(),
                            "dim": g.dim(),
                            "commutant_dim": g.commutant_dim(),
                            "center_dim": g.center_dim(),
                            "is_factor": g.is_factor(),
                        })),
                );
            }
            "transpose" => {
                let t = u.transpose();
                let ok = verify_magic(&t).passes() == base && t.transpose().rows() == u.rows();
                rows.push(Check::new(
                    "magic.ops.transpose",
                    "q_ij ↦ q_ji preserves the relations and is an involution",
                    TRANSPOSE,
                    Status::from_ok(ok),
                ));
            }
            "comultiply" => match comultiply_grid(&u) {
                Ok(x) => {
                    rows.push(
                        Check::new("magic.ops.comultiply", "x_ij = Σ_k q_ik ⊗ q_kj is a magic unitary", COMULTIPLY, Status::Pass)
                            .with_details(json!({ "ambient_dim": x.ambient_dim() })),
                    );
                    if let Some(n) = classical {
                        let (h, _) = classical_quantum_permutation_algebra::<F>(n).expect("classical algebras verify");
                        let g = SymmetricGroup::new(n);
                        let bad = (0..n)
                            .flat_map(|i| (0..n).map(move |j| (i, j)))
                            .find(|&(i, j)| x.entry(i, j) != &coproduct_concrete(&h, &classical_generator(&g, i, j)));
                        let mut row = Check::new(
                            "magic.ops.comultiply_coproduct",
                            "x_ij = Δ(p_ij) under ℂ^{n!} ⊗ ℂ^{n!} ≅ ℂ^{(n!)²}",
                            COMULTIPLY,
                            Status::from_ok(bad.is_none()),
                        );
                        if let Some((i, j)) = bad {
                            row = row.with_witness(format!("entry ({}, {})", i + 1, j + 1));
                        }
                        rows.push(row);
                    }
                }
                Err(e) => rows.push(outcome_row("magic.ops.comultiply", "x_ij = Σ_k q_ik ⊗ q_kj", COMULTIPLY, Err(e))),
            },
            "corner" => {
                let r = corner_embed(&u).and_then(|c| {
                    let back = corner_restrict(&c)?;
                    Ok(verify_magic(&c).passes() && back.rows() == u.rows())
                });
                let row = match r {
                    Ok(ok) => Check::new("magic.ops.corner", "[P 0; 0 1] is magic and restricts to P", CORNER, Status::from_ok(ok)),
                    Err(e) => outcome_row("magic.ops.corner", "[P 0; 0 1] is magic and restricts to P", CORNER, Err(e)),
                };
                rows.push(row);
            }
            other if other.starts_with("pad") => {
                let m = parse_builtin(other, "pad", 1, &path)?[0];
                let id = format!("magic.ops.pad_{m}");
                let description = format!("padding to {m}×{m} keeps the projection and orthogonality relations");
                match pad_to(&u, m) {
                    Ok(p) => {
                        let r = verify_magic(&p);
                        rows.push(Check::new(id, description, PAD, Status::from_ok(r.passes())).with_details(json!({
                            "row_defect_ranks": r.row_defect_ranks,
                            "col_defect_ranks": r.col_defect_ranks,
                        })));
                    }
                    Err(e) => rows.push(outcome_row(id, description, PAD, Err(e))),
                }
            }
            other => return Err(input(&path, format!("unknown operation \"{other}\""))),
        }
    }

    for &k in &sec.carrier {
        let id = format!("magic.carrier.k{k}");
        let description = format!("central-carrier certificate w_{k} (finite certificate only)");
        match carrier_certificate(&u, k) {
            Ok(c) => rows.push(
                Check::new(id, description, CARRIER, Status::Pass).with_details({
                    let mut v = serde_json::to_value(c.summary()).expect("summaries serialize");
                    v["note"] = json!(CARRIER_NOTE);
                    v
                }),
            ),
            Err(e) => rows.push(outcome_row(id, description, CARRIER, Err(e))),
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::super::fixtures::fixture;
    use super::*;

    fn run(name: &str, mode: Mode) -> Report {
        let opts = RunOptions { mode: Some(mode), ..Default::default() };
        run_scenario(&fixture(name).unwrap(), false, &opts).unwrap()
    }

    fn failures(r: &Report) -> Vec<&str> {
        r.checks.iter().filter(|c| !c.as_expected()).map(|c| c.id.as_str()).collect()
    }

    #[test]
    fn fixtures_meet_their_expectations() {
        for name in ["empty", "classical:3", "classical-tower:3", "perturbed", "flipped", "paper-block", "paper-block-truncated", "two-block"] {
            let r = run(name, Mode::Exact);
            assert!(r.expectations_met(), "{name}: {:?}", failures(&r));
        }
    }

    #[test]
    fn float_mode_agrees_with_exact() {
        for name in ["classical:3", "paper-block"] {
            let a = run(name, Mode::Exact);
            let b = run(name, Mode::Float);
            let status = |r: &Report| r.checks.iter().map(|c| (c.id.clone(), c.status)).collect::<Vec<_>>();
            assert_eq!(status(&a), status(&b), "{name}");
        }
    }

    #[test]
    fn tower_limit_rows_are_present() {
        let r = run("classical-tower:3", Mode::Exact);
        for id in ["system.limit.compatible", "hopf.limit.coassociativity", "hopf.system.coproduct_2", "action.limit.coaction"] {
            assert_eq!(r.check(id).map(|c| c.status), Some(Status::Pass), "{id}");
        }
    }

    #[test]
    fn perturbed_tower_fails_the_system_law() {
        let text = r#"{"hopf": {"tower": "classical:4", "perturb_stage": 3}}"#;
        let r = run_scenario_text(text, &RunOptions::default()).unwrap();
        assert_eq!(r.check("hopf.system.coproduct_3").unwrap().status, Status::Fail);
        assert_eq!(r.check("hopf.limit").unwrap().status, Status::Fail);
    }

    #[test]
    fn truncated_sums_report_defects() {
        let r = run("paper-block-truncated", Mode::Exact);
        let sums = r.check("magic.relations.sums").unwrap();
        assert_eq!(sums.status, Status::Fail);
        assert!(sums.details.as_ref().unwrap()["row_defect_ranks"].as_array().unwrap().iter().any(|v| v != 0));
        assert_eq!(r.check("magic.relations.projections").unwrap().status, Status::Pass);
    }

    #[test]
    fn mode_precedence() {
        let s = Scenario { mode: Some(Mode::Exact), ..Default::default() };
        let env = RunOptions { env_mode: Some("float".into()), ..Default::default() };
        assert_eq!(resolve_mode(&env, &s, true).unwrap().0, Mode::Exact);
        assert_eq!(resolve_mode(&env, &Scenario::default(), false).unwrap().0, Mode::Float);
        assert_eq!(resolve_mode(&RunOptions::default(), &Scenario::default(), true).unwrap().0, Mode::Float);
        let cli = RunOptions { mode: Some(Mode::Float), ..Default::default() };
        assert_eq!(resolve_mode(&cli, &s, false).unwrap().0, Mode::Float);
    }

    #[test]
    fn decimals_in_exact_mode_name_the_literal() {
        let text = r#"{"mode": "exact", "magic": {"entries": [[[[0.5]]]]}}"#;
        match run_scenario_text(text, &RunOptions::default()).unwrap_err() {
            ScenarioError::Input { path, .. } => assert_eq!(path, "magic.entries[0][0][0][0]"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn unknown_expectation_is_an_input_error() {
        let text = r#"{"expectations": [{"check": "nope", "expected": "PASS"}]}"#;
        match run_scenario_text(text, &RunOptions::default()).unwrap_err() {
            ScenarioError::Input { path, .. } => assert_eq!(path, "expectations[0].check"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn size_limits() {
        let err = run_scenario_text(r#"{"hopf": {"builtin": "classical:5"}}"#, &RunOptions::default()).unwrap_err();
        assert!(matches!(err, ScenarioError::Input { ref path, .. } if path == "hopf.builtin"));
        assert!(run_scenario_text(r#"{"hopf": {"builtin": "classical:6"}, "allow_large": true}"#, &RunOptions::default()).is_err());
    }

    #[test]
    fn explicit_action_of_an_explicit_hopf_structure() {
        let text = r#"{
            "hopf": {"algebra": [1], "coproduct": {"matrix": [[1]]}, "counit": {"matrix": [[1]]}, "antipode": {"matrix": [[1]]}},
            "action": {"carrier": [2], "map": {"block_map": [0]}}
        }"#;
        let r = run_scenario_text(text, &RunOptions::default()).unwrap();
        assert!(r.checks.iter().all(|c| c.status == Status::Pass), "{:?}", failures(&r));
    }
}
