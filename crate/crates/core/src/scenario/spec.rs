use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::literal::contains_decimal;
use super::report::Status;
use super::ScenarioError;

/// Arithmetic used for a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl std::str::FromStr for Mode {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(ScenarioError::Input {
                path: "mode".into(),
                message: format!("unknown mode \"{other}\", expected exact or float"),
            }),
        }
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// A scenario file.
#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    /// Permits `C(S_5)` and towers of depth 5.
    #[serde(default, skip_serializing_if = "is_false")]
    pub allow_large: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hopf: Option<HopfSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub magic: Option<MagicSection>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub expectations: Vec<Expectation>,
}

/// A linear map between multi-matrix algebras: either a block map with
/// optional unitaries, or a dense coordinate matrix (target × source).
#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_map: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitaries: Option<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Value>,
}

/// Block sizes of a multi-matrix algebra, written `{"blocks": [k_1, …]}` or
/// as the bare list.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum AlgebraSpec {
    Blocks { blocks: Vec<usize> },
    Dims(Vec<usize>),
}

impl AlgebraSpec {
    pub fn dims(&self) -> &[usize] {
        match self {
            AlgebraSpec::Blocks { blocks } => blocks,
            AlgebraSpec::Dims(d) => d,
        }
    }
}

impl From<Vec<usize>> for AlgebraSpec {
    fn from(blocks: Vec<usize>) -> Self {
        AlgebraSpec::Blocks { blocks }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    /// `"classical:N"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    /// `M_1, …, M_N`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebras: Option<Vec<AlgebraSpec>>,
    /// `maps[i]` is `φ_{i+1}: M_{i+2} → M_{i+1}`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<MapSpec>,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum CoproductSpec {
    /// `"perturbed"` or `"flipped"`.
    Named(String),
    Map(MapSpec),
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct HopfSection {
    /// `"classical:n"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    /// `"classical:N"`: every stage, the system laws and the limit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coproduct: Option<CoproductSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counit: Option<MapSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub antipode: Option<MapSpec>,
    /// Replace the coproduct of this tower stage by `f ↦ f(στ⁻¹)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturb_stage: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSection {
    /// `"permutation:n"`: `C(S_n)` acting on `ℂ^width`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    /// `"classical:N"`: the permutation actions along the tower and their limit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    /// `W` for an explicit action of the `hopf` section.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier: Option<AlgebraSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSpec>,
    /// Precompose this tower stage's action with the swap of the first two points.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturb_stage: Option<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindSpec {
    #[default]
    Finite,
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum GadgetSpec {
    /// `"chain"`: `t_k` the projection onto `e_k + e_{k+1}`.
    Named(String),
    List(Vec<Value>),
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct MagicSection {
    /// `"classical:n"` or `"paper_block:m,K"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<KindSpec>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub declared_infinite: bool,
    /// Checked against the size of the entries when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gadgets: Option<GadgetSpec>,
    /// Any of `generate`, `transpose`, `comultiply`, `corner`, `pad:m`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ops: Vec<String>,
    /// Depths `k` for central-carrier certificates.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub carrier: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub check: String,
    pub expected: Status,
}

/// Parse a scenario, also reporting whether any literal is a decimal.
pub fn parse_scenario(text: &str) -> Result<(Scenario, bool), ScenarioError> {
    let located = |e: serde_json::Error| ScenarioError::Parse { line: e.line(), column: e.column(), message: e.to_string() };
    let mut raw: Value = serde_json::from_str(text).map_err(located)?;
    let scenario: Scenario = serde_json::from_str(text).map_err(located)?;
    if let Value::Object(map) = &mut raw {
        map.remove("tol");
    }
    Ok((scenario, contains_decimal(&raw)))
}

/// `"prefix:a,b,…"` as integers.
pub fn parse_builtin(s: &str, prefix: &str, arity: usize, path: &str) -> Result<Vec<usize>, ScenarioError> {
    let bad = || ScenarioError::Input {
        path: path.to_string(),
        message: format!("expected \"{prefix}:{}\", got \"{s}\"", vec!["<count>"; arity].join(",")),
    };
    let rest = s.strip_prefix(prefix).and_then(|r| r.strip_prefix(':')).ok_or_else(bad)?;
    let values = rest.split(',').map(|x| x.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?;
    if values.len() != arity {
        return Err(bad());
    }
    Ok(values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_scenario("{\n  \"name\": \"x\",\n  oops\n}").unwrap_err();
        assert!(matches!(err, ScenarioError::Parse { line: 3, column: 3, .. }));
    }

    #[test]
    fn unknown_keys_are_rejected_with_position() {
        let err = parse_scenario("{\"nmae\": \"x\"}").unwrap_err();
        assert!(matches!(err, ScenarioError::Parse { line: 1, .. }));
    }

    #[test]
    fn tolerance_is_not_a_decimal_literal() {
        let (s, decimals) = parse_scenario("{\"tol\": 0.001}").unwrap();
        assert_eq!(s.tol, Some(0.001));
        assert!(!decimals);
        let (_, decimals) =
            parse_scenario("{\"magic\": {\"entries\": [[[[0.5, 0.5], [0.5, 0.5]]]]}}").unwrap();
        assert!(decimals);
    }

    #[test]
    fn algebra_descriptors() {
        let (s, _) = parse_scenario(r#"{"system": {"algebras": [{"blocks": [2]}, [2, 3]]}}"#).unwrap();
        let algebras = s.system.unwrap().algebras.unwrap();
        let dims: Vec<&[usize]> = algebras.iter().map(AlgebraSpec::dims).collect();
        assert_eq!(dims, vec![&[2][..], &[2, 3][..]]);
    }

    #[test]
    fn builtin_names() {
        assert_eq!(parse_builtin("paper_block:3,4", "paper_block", 2, "p").unwrap(), vec![3, 4]);
        assert!(parse_builtin("classical:x", "classical", 1, "p").is_err());
        assert!(parse_builtin("classical:3", "paper_block", 2, "p").is_err());
    }
}
