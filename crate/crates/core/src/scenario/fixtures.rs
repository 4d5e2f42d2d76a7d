use super::report::Status;
use super::spec::{
    ActionSection, CoproductSpec, Expectation, GadgetSpec, HopfSection, KindSpec, MagicSection, MapSpec, Scenario,
    SystemSection,
};
use super::ScenarioError;

pub const FIXTURE_NAMES: &[&str] = &[
    "empty",
    "classical:n",
    "classical-tower:N",
    "perturbed",
    "flipped",
    "paper-block",
    "paper-block-truncated",
    "two-block",
];

fn expect(check: &str, expected: Status) -> Expectation {
    Expectation { check: check.to_string(), expected }
}

/// The block grid on `ℂ^m` at truncation `K`, with optional flip gadgets.
pub fn demo_paper_block(m: usize, k: usize, gadgets: bool) -> Scenario {
    let truncated = k <= m;
    Scenario {
        name: Some(format!("paper-block m={m} K={k}")),
        magic: Some(MagicSection {
            builtin: Some(format!("paper_block:{m},{k}")),
            gadgets: gadgets.then(|| GadgetSpec::Named("chain".into())),
            ops: vec!["generate".into(), "transpose".into(), "comultiply".into()],
            carrier: vec![1],
            ..Default::default()
        }),
        expectations: if truncated {
            vec![expect("magic.relations.sums", Status::Fail), expect("magic.ops.comultiply", Status::Fail)]
        } else {
            vec![]
        },
        ..Default::default()
    }
}

fn degree(name: &str, arg: Option<&str>, default: usize) -> Result<usize, ScenarioError> {
    arg.map(|a| {
        a.parse::<usize>()
            .map_err(|_| ScenarioError::Input { path: "fixture".into(), message: format!("bad size in \"{name}\"") })
    })
    .transpose()
    .map(|n| n.unwrap_or(default))
}

/// A ready-made scenario by name; sizes follow a colon.
pub fn fixture(name: &str) -> Result<Scenario, ScenarioError> {
    let (base, arg) = match name.split_once(':') {
        Some((b, a)) => (b, Some(a)),
        None => (name, None),
    };
    let s = match base {
        "empty" => Scenario { name: Some("empty".into()), ..Default::default() },
        "classical" => {
            let n = degree(name, arg, 3)?;
            Scenario {
                name: Some(format!("classical C(S_{n})")),
                hopf: Some(HopfSection { builtin: Some(format!("classical:{n}")), ..Default::default() }),
                action: Some(ActionSection { builtin: Some(format!("permutation:{n}")), ..Default::default() }),
                magic: Some(MagicSection {
                    builtin: Some(format!("classical:{n}")),
                    ops: if n <= 3 {
                        vec!["transpose".into(), "comultiply".into(), "corner".into()]
                    } else {
                        vec!["transpose".into(), "corner".into()]
                    },
                    ..Default::default()
                }),
                ..Default::default()
            }
        }
        "classical-tower" => {
            let n = degree(name, arg, 3)?;
            Scenario {
                name: Some(format!("classical tower of depth {n}")),
                system: Some(SystemSection { builtin: Some(format!("classical:{n}")), ..Default::default() }),
                hopf: Some(HopfSection { tower: Some(format!("classical:{n}")), ..Default::default() }),
                action: Some(ActionSection { tower: Some(format!("classical:{n}")), ..Default::default() }),
                ..Default::default()
            }
        }
        "perturbed" => Scenario {
            name: Some("perturbed coproduct on C(S_3)".into()),
            hopf: Some(HopfSection {
                builtin: Some("classical:3".into()),
                coproduct: Some(CoproductSpec::Named("perturbed".into())),
                ..Default::default()
            }),
            expectations: vec![
                expect("hopf.verify.coassociativity", Status::Fail),
                expect("hopf.verify.counit_left", Status::Fail),
            ],
            ..Default::default()
        },
        "flipped" => Scenario {
            name: Some("flipped coproduct on C(S_3)".into()),
            hopf: Some(HopfSection {
                builtin: Some("classical:3".into()),
                coproduct: Some(CoproductSpec::Named("flipped".into())),
                ..Default::default()
            }),
            expectations: vec![expect("hopf.compare.original", Status::Fail)],
            ..Default::default()
        },
        "paper-block" => {
            let mut s = demo_paper_block(3, 4, true);
            s.name = Some("paper-block".into());
            s
        }
        "paper-block-truncated" => {
            let mut s = demo_paper_block(3, 3, false);
            s.name = Some("paper-block-truncated".into());
            if let Some(m) = s.magic.as_mut() {
                m.kind = Some(KindSpec::Truncated);
            }
            s
        }
        "two-block" => Scenario {
            name: Some("M_2 ← M_2 ⊕ M_3".into()),
            system: Some(SystemSection {
                algebras: Some(vec![vec![2].into(), vec![2, 3].into()]),
                maps: vec![MapSpec { block_map: Some(vec![0]), ..Default::default() }],
                ..Default::default()
            }),
            ..Default::default()
        },
        _ => {
            return Err(ScenarioError::Input {
                path: "fixture".into(),
                message: format!("unknown fixture \"{name}\"; known: {}", FIXTURE_NAMES.join(", ")),
            })
        }
    };
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_name_resolves() {
        for name in FIXTURE_NAMES {
            let name = name.replace(":n", ":3").replace(":N", ":3");
            assert!(fixture(&name).is_ok(), "{name}");
        }
        assert!(fixture("nope").is_err());
    }

    #[test]
    fn fixtures_round_trip_through_json() {
        let s = fixture("paper-block").unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<Scenario>(&text).unwrap(), s);
    }
}
