//! Multi-step constructions: a base scheme followed by line additions, with
//! optional expected matrices.
//!
//! ```text
//! seed: 1
//! acm profile: 5 5 4 3
//! expect:
//! 1 1 1 1 1
//! ...
//! step: add-row n=5 hit=5
//! expect:
//! ...
//! ```
//!
//! The base is either `acm profile:` (points per row of a staircase) or a
//! `grid:` block in the configuration format. An `expect:` block checks the
//! matrix produced by the line above it.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::acm::{self, StaircaseProfile};
use crate::bigraded::DeltaMatrix;
use crate::engine::{
    self, EngineError, HypothesisVerdict, LineAddition, LineAdditionSpec, LineStep, Mode,
};
use crate::field::{Field, FieldError};
use crate::format::{parse_int_row, FormatError};
use crate::oracle::{self, parse_config, ConfigError, ConfigFile, GridConfig};

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("step {step} ({line_step}): {source}")]
    Engine {
        step: usize,
        line_step: LineStep,
        source: EngineError,
    },
    #[error(transparent)]
    Field(#[from] FieldError),
}

impl From<FormatError> for ReplayError {
    fn from(e: FormatError) -> Self {
        let line = match e {
            FormatError::BadInteger { line, .. } => line,
            _ => 0,
        };
        ReplayError::Parse {
            line,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Base {
    Profile(StaircaseProfile),
    Grid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplayScript {
    pub base: Base,
    pub config: ConfigFile,
    pub steps: Vec<LineStep>,
    /// `expectations[0]` is for the base, `expectations[k]` for step `k`.
    pub expectations: Vec<Option<DeltaMatrix>>,
}

fn parse_err(line: usize, message: impl Into<String>) -> ReplayError {
    ReplayError::Parse {
        line,
        message: message.into(),
    }
}

/// Parses a script. Lines belonging to steps, profiles and expectations are
/// consumed here; the rest goes to the configuration parser.
pub fn parse_script(text: &str) -> Result<ReplayScript, ReplayError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut rest: Vec<&str> = lines.clone();
    let mut profile = None;
    let mut steps = Vec::new();
    let mut expectations = vec![None];
    let mut k = 0;
    while k < lines.len() {
        let line_no = k + 1;
        let line = lines[k].split('#').next().unwrap_or("").trim();
        k += 1;
        let Some((key, value)) = line.split_once(':') else {
            continue;
        };
        let value = value.trim();
        match key.trim() {
            "acm profile" => {
                if profile.is_some() {
                    return Err(parse_err(line_no, "duplicate `acm profile:`"));
                }
                let counts = value
                    .split_whitespace()
                    .map(|t| t.parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| parse_err(line_no, format!("bad profile {value:?}")))?;
                profile = Some(
                    StaircaseProfile::from_row_counts(&counts)
                        .map_err(|e| parse_err(line_no, e.to_string()))?,
                );
            }
            "step" => {
                let step: LineStep = value.parse().map_err(|e: String| parse_err(line_no, e))?;
                steps.push(step);
                expectations.push(None);
            }
            "expect" => {
                let slot = expectations.last_mut().expect("base slot exists");
                if slot.is_some() {
                    return Err(parse_err(line_no, "two `expect:` blocks for one matrix"));
                }
                let mut rows = Vec::new();
                while k < lines.len() {
                    let row = lines[k].split('#').next().unwrap_or("").trim();
                    if row.is_empty() || row.contains(':') {
                        break;
                    }
                    rows.push(parse_int_row(row, k + 1)?);
                    rest[k] = "";
                    k += 1;
                }
                if rows.is_empty() {
                    return Err(parse_err(line_no, "empty `expect:` block"));
                }
                *slot = Some(
                    DeltaMatrix::from_rows(&rows).map_err(|e| parse_err(line_no, e.to_string()))?,
                );
            }
            _ => continue,
        }
        rest[line_no - 1] = "";
    }
    let config = parse_config(&rest.join("\n"))?;
    let base = match (profile, &config.grid) {
        (Some(p), None) => Base::Profile(p),
        (None, Some(_)) => Base::Grid,
        (Some(_), Some(_)) => {
            return Err(parse_err(
                0,
                "give either `acm profile:` or `grid:`, not both",
            ))
        }
        (None, None) => return Err(parse_err(0, "missing `acm profile:` or `grid:`")),
    };
    Ok(ReplayScript {
        base,
        config,
        steps,
        expectations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Route {
    /// Closed form or hypothesis-free addition for staircase schemes.
    Staircase,
    Engine,
    Oracle,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepOutcome {
    pub step: String,
    pub spec: LineAdditionSpec,
    pub route: Route,
    pub addition: LineAddition,
    /// Oracle matrix of the extended configuration, when requested.
    #[serde(skip)]
    pub oracle: Option<DeltaMatrix>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Mismatch {
    /// 0 for the base, `k` for step `k`.
    pub index: usize,
    pub source: &'static str,
    #[serde(serialize_with = "crate::format::serialize_delta")]
    pub expected: DeltaMatrix,
    #[serde(serialize_with = "crate::format::serialize_delta")]
    pub found: DeltaMatrix,
}

#[derive(Debug, Clone)]
pub struct ReplayOutcome {
    pub base: DeltaMatrix,
    pub base_route: Route,
    pub steps: Vec<StepOutcome>,
    pub config: GridConfig,
    pub mismatches: Vec<Mismatch>,
}

impl ReplayOutcome {
    /// Base matrix followed by each step's result.
    pub fn matrices(&self) -> Vec<&DeltaMatrix> {
        std::iter::once(&self.base)
            .chain(self.steps.iter().map(|s| &s.addition.delta))
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ReplayOptions {
    /// Overrides the script's `seed:`; both absent means 0.
    pub seed: Option<u64>,
    pub field: Field,
    pub mode: Mode,
    /// Recompute every matrix with the oracle and report disagreements.
    pub verify_with_oracle: bool,
}

/// Runs the script. Staircase schemes use the closed form and the
/// hypothesis-free addition; other schemes use the engine. New lines get
/// random coordinates drawn from the seed.
pub fn run_script(
    script: &ReplayScript,
    options: ReplayOptions,
) -> Result<ReplayOutcome, ReplayError> {
    let seed = options.seed.or(script.config.seed).unwrap_or(0);
    let mut config = match &script.base {
        Base::Profile(p) => GridConfig::with_seed(p.incidence(), seed),
        Base::Grid => script.config.to_grid_config(seed)?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_57e9);
    let mut mismatches = Vec::new();
    let mut check =
        |index: usize, source: &'static str, expected: &DeltaMatrix, found: &DeltaMatrix| {
            if expected != found {
                mismatches.push(Mismatch {
                    index,
                    source,
                    expected: expected.clone(),
                    found: found.clone(),
                });
            }
        };

    let (base, base_route) = match acm::is_acm(config.incidence()) {
        acm::AcmVerdict::Staircase { profile, .. } => (acm::delta_acm(&profile), Route::Staircase),
        acm::AcmVerdict::NotStaircase { .. } => (
            oracle::hilbert_matrix(&config, options.field)?,
            Route::Oracle,
        ),
    };
    if options.verify_with_oracle && base_route != Route::Oracle {
        check(
            0,
            "oracle",
            &oracle::hilbert_matrix(&config, options.field)?,
            &base,
        );
    }
    if let Some(e) = &script.expectations[0] {
        check(0, "expect", e, &base);
    }

    let mut current = base.clone();
    let mut steps = Vec::new();
    for (idx, step) in script.steps.iter().enumerate() {
        let number = idx + 1;
        let wrap = |source| ReplayError::Engine {
            step: number,
            line_step: step.clone(),
            source,
        };
        let spec = step.to_spec(config.incidence()).map_err(wrap)?;
        let staircase = acm::is_acm(config.incidence()).is_acm();
        let (addition, route) = if staircase {
            (
                acm::acm_add_partial_line(&current, &spec).map_err(wrap)?,
                Route::Staircase,
            )
        } else {
            (
                engine::add_partial_line(&current, &spec, options.mode).map_err(wrap)?,
                Route::Engine,
            )
        };
        if !step.hit.is_empty() {
            let extra = step.extra_lines(config.incidence());
            config = oracle::extend_with_line(&config, step.direction, &step.hit, extra, &mut rng)?;
        }
        let truth = if options.verify_with_oracle {
            let m = oracle::hilbert_matrix(&config, options.field)?;
            check(number, "oracle", &m, &addition.delta);
            Some(m)
        } else {
            None
        };
        if let Some(e) = &script.expectations[number] {
            check(number, "expect", e, &addition.delta);
        }
        current = addition.delta.clone();
        steps.push(StepOutcome {
            step: step.to_string(),
            spec,
            route,
            addition,
            oracle: truth,
        });
    }
    Ok(ReplayOutcome {
        base,
        base_route,
        steps,
        config,
        mismatches,
    })
}

/// Engine prediction against the oracle for one step on a configuration.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub spec: LineAdditionSpec,
    pub verdict: HypothesisVerdict,
    #[serde(serialize_with = "crate::format::serialize_delta")]
    pub predicted: DeltaMatrix,
    #[serde(serialize_with = "crate::format::serialize_delta")]
    pub oracle: DeltaMatrix,
    /// `(i, j, predicted, oracle)` for each differing entry.
    pub differences: Vec<(usize, usize, i64, i64)>,
}

impl Comparison {
    pub fn agrees(&self) -> bool {
        self.differences.is_empty()
    }
}

/// Applies the update rule in predict mode and recomputes the extended
/// configuration with the oracle.
pub fn compare_step(
    config: &GridConfig,
    step: &LineStep,
    field: Field,
    seed: u64,
) -> Result<Comparison, ReplayError> {
    let wrap = |source| ReplayError::Engine {
        step: 1,
        line_step: step.clone(),
        source,
    };
    let spec = step.to_spec(config.incidence()).map_err(wrap)?;
    let d = oracle::hilbert_matrix(config, field)?;
    let addition = engine::add_partial_line(&d, &spec, Mode::Predict).map_err(wrap)?;
    let extended = if step.hit.is_empty() {
        config.clone()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        oracle::extend_with_line(
            config,
            step.direction,
            &step.hit,
            step.extra_lines(config.incidence()),
            &mut rng,
        )?
    };
    let truth = oracle::hilbert_matrix(&extended, field)?;
    let differences = diff_entries(&addition.delta, &truth);
    Ok(Comparison {
        spec,
        verdict: addition.verdict,
        predicted: addition.delta,
        oracle: truth,
        differences,
    })
}

/// Entries where the two matrices disagree, over the union of supports.
pub fn diff_entries(left: &DeltaMatrix, right: &DeltaMatrix) -> Vec<(usize, usize, i64, i64)> {
    let cells: BTreeSet<_> = left.diff_positions(right).into_iter().collect();
    cells
        .into_iter()
        .map(|(i, j)| (i, j, left.get(i, j), right.get(i, j)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const STAIRCASE_STEP: &str = "\
# staircase plus one point on a new column
seed: 2
acm profile: 2 1
expect:
1 1
1 0
step: add-row n=2 hit=2
";

    fn options(verify: bool) -> ReplayOptions {
        ReplayOptions {
            seed: None,
            field: Field::Rational,
            mode: Mode::Strict,
            verify_with_oracle: verify,
        }
    }

    #[test]
    fn parses_profile_steps_and_expectations() {
        let s = parse_script(STAIRCASE_STEP).unwrap();
        assert_eq!(
            s.base,
            Base::Profile(StaircaseProfile::from_row_counts(&[2, 1]).unwrap())
        );
        assert_eq!(s.steps.len(), 1);
        assert_eq!(s.expectations.len(), 2);
        assert!(s.expectations[0].is_some() && s.expectations[1].is_none());
        assert_eq!(s.config.seed, Some(2));
    }

    #[test]
    fn runs_and_verifies() {
        let s = parse_script(STAIRCASE_STEP).unwrap();
        let out = run_script(&s, options(true)).unwrap();
        assert!(out.mismatches.is_empty(), "{:?}", out.mismatches);
        assert_eq!(out.steps[0].route, Route::Staircase);
        assert_eq!(out.config.degree(), 4);
    }

    #[test]
    fn reports_expectation_mismatch() {
        let text = STAIRCASE_STEP.replace("1 0\n", "1 1\n");
        let out = run_script(&parse_script(&text).unwrap(), options(false)).unwrap();
        assert_eq!(out.mismatches.len(), 1);
        assert_eq!(out.mismatches[0].index, 0);
    }

    #[test]
    fn rejects_bad_scripts() {
        let err = |t: &str| parse_script(t).unwrap_err();
        assert!(matches!(
            err("acm profile: 1 2\n"),
            ReplayError::Parse { line: 1, .. }
        ));
        assert!(matches!(
            err("acm profile: 1\nstep: add-row n=q\n"),
            ReplayError::Parse { line: 2, .. }
        ));
        assert!(matches!(err("seed: 1\n"), ReplayError::Parse { .. }));
        assert!(matches!(
            err("acm profile: 1\ngrid:\nX\n"),
            ReplayError::Parse { .. }
        ));
        assert!(matches!(
            err("acm profile: 1\nexpect:\n1 x\n"),
            ReplayError::Parse { line: 3, .. }
        ));
    }

    #[test]
    fn strict_refusal_names_the_step() {
        let text = "grid:\n..X\n.X.\nX..\nstep: add-row n=2 hit=2\n";
        let e = run_script(&parse_script(text).unwrap(), options(false)).unwrap_err();
        assert!(matches!(
            e,
            ReplayError::Engine {
                step: 1,
                source: EngineError::HypothesisNotMet(_),
                ..
            }
        ));
    }

    #[test]
    fn comparison_reports_differences() {
        let cfg = parse_config("grid:\n..X\n.X.\nX..\n")
            .unwrap()
            .to_grid_config(1)
            .unwrap();
        let step: LineStep = "add-row n=2 hit=2".parse().unwrap();
        let c = compare_step(&cfg, &step, Field::Rational, 5).unwrap();
        assert!(!c.verdict.is_satisfied());
        assert!(c.differences.contains(&(1, 2, 0, -1)));
        let full: LineStep = "add-row n=3 hit=0,1,2,3".parse().unwrap();
        assert!(compare_step(&cfg, &full, Field::Rational, 5)
            .unwrap()
            .agrees());
    }
}
