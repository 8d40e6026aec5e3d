//! Line-oriented scenario scripts for ledger runs.
//!
//! Grammar (ASCII, LF or CRLF, tokens whitespace-separated):
//!
//! ```text
//! # comment
//! prepare ghz
//! set A y
//! set B x
//! snapshot t_k
//! readout A B C
//! ```
//!
//! Exactly one `prepare` line is required and it must come first. Sites
//! are named A, B, C (or 0, 1, 2).

use std::path::Path;

use crate::error::{Error, Result};
use crate::qubit::Axis;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateId {
    Bell,
    Ghz,
    CatBell,
    Noon,
}

impl StateId {
    pub fn parse(s: &str) -> Option<StateId> {
        match s {
            "bell" => Some(StateId::Bell),
            "ghz" => Some(StateId::Ghz),
            "cat-bell" => Some(StateId::CatBell),
            "noon" => Some(StateId::Noon),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            StateId::Bell => "bell",
            StateId::Ghz => "ghz",
            StateId::CatBell => "cat-bell",
            StateId::Noon => "noon",
        }
    }

    pub fn num_sites(&self) -> usize {
        match self {
            StateId::Bell | StateId::CatBell => 2,
            StateId::Ghz | StateId::Noon => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Set { site: usize, axis: Axis },
    Readout { sites: Vec<usize> },
    Snapshot { label: String },
}

#[derive(Debug, Clone)]
pub struct ScenarioScript {
    pub prepare: StateId,
    pub prepare_line: usize,
    /// Remaining steps with their 1-based source lines.
    pub steps: Vec<(usize, Step)>,
}

fn parse_site(token: &str, num_sites: usize, line: usize) -> Result<usize> {
    let site = match token {
        "A" | "a" => Some(0),
        "B" | "b" => Some(1),
        "C" | "c" => Some(2),
        other => other.parse::<usize>().ok(),
    };
    match site {
        Some(s) if s < num_sites => Ok(s),
        Some(s) => Err(Error::ScenarioParse {
            line,
            message: format!("site {s} out of range: state has {num_sites} sites"),
        }),
        None => Err(Error::ScenarioParse {
            line,
            message: format!("unrecognized site token `{token}`"),
        }),
    }
}

/// Parse a scenario from text. Line numbers in errors are 1-based.
pub fn parse_scenario_str(text: &str) -> Result<ScenarioScript> {
    let mut prepare: Option<(StateId, usize)> = None;
    let mut steps: Vec<(usize, Step)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim_end_matches('\r');
        let content = match content.find('#') {
            Some(pos) => &content[..pos],
            None => content,
        };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        match tokens[0] {
            "prepare" => {
                if let Some((_, first_line)) = prepare {
                    return Err(Error::ScenarioParse {
                        line,
                        message: format!(
                            "duplicate prepare: already given at line {first_line}"
                        ),
                    });
                }
                if !steps.is_empty() {
                    return Err(Error::ScenarioParse {
                        line,
                        message: "prepare must be the first step".to_string(),
                    });
                }
                if tokens.len() != 2 {
                    return Err(Error::ScenarioParse {
                        line,
                        message: "expected `prepare <bell|ghz|cat-bell|noon>`".to_string(),
                    });
                }
                let id = StateId::parse(tokens[1]).ok_or_else(|| Error::ScenarioParse {
                    line,
                    message: format!("unknown state id `{}`", tokens[1]),
                })?;
                prepare = Some((id, line));
            }
            "set" => {
                let (id, _) = prepare.ok_or_else(|| Error::ScenarioParse {
                    line,
                    message: "set before prepare".to_string(),
                })?;
                if tokens.len() != 3 {
                    return Err(Error::ScenarioParse {
                        line,
                        message: "expected `set <site> <axis>`".to_string(),
                    });
                }
                let site = parse_site(tokens[1], id.num_sites(), line)?;
                let axis = Axis::parse(tokens[2]).map_err(|_| Error::ScenarioParse {
                    line,
                    message: format!("unknown axis `{}`", tokens[2]),
                })?;
                steps.push((line, Step::Set { site, axis }));
            }
            "readout" => {
                let (id, _) = prepare.ok_or_else(|| Error::ScenarioParse {
                    line,
                    message: "readout before prepare".to_string(),
                })?;
                if tokens.len() < 2 {
                    return Err(Error::ScenarioParse {
                        line,
                        message: "expected `readout <site>...`".to_string(),
                    });
                }
                let sites = tokens[1..]
                    .iter()
                    .map(|t| parse_site(t, id.num_sites(), line))
                    .collect::<Result<Vec<usize>>>()?;
                steps.push((line, Step::Readout { sites }));
            }
            "snapshot" => {
                if prepare.is_none() {
                    return Err(Error::ScenarioParse {
                        line,
                        message: "snapshot before prepare".to_string(),
                    });
                }
                if tokens.len() != 2 {
                    return Err(Error::ScenarioParse {
                        line,
                        message: "expected `snapshot <label>`".to_string(),
                    });
                }
                steps.push((line, Step::Snapshot { label: tokens[1].to_string() }));
            }
            other => {
                return Err(Error::ScenarioParse {
                    line,
                    message: format!("unknown step `{other}`"),
                });
            }
        }
    }
    let (prepare, prepare_line) = prepare.ok_or_else(|| Error::ScenarioParse {
        line: 0,
        message: "missing prepare".to_string(),
    })?;
    Ok(ScenarioScript { prepare, prepare_line, steps })
}

/// Parse a scenario file.
pub fn parse_scenario(path: &Path) -> Result<ScenarioScript> {
    let text = std::fs::read_to_string(path)?;
    parse_scenario_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_tracked_ghz_sequence() {
        let text = "# tracked rotation sequence\n\
                    prepare ghz\n\
                    set A y\n\
                    set B x\n\
                    set C x\n\
                    snapshot t_k\n\
                    set B y\n\
                    snapshot t_m\n\
                    set A x\n\
                    snapshot t_4\n\
                    readout A B C\n";
        let s = parse_scenario_str(text).unwrap();
        assert_eq!(s.prepare, StateId::Ghz);
        assert_eq!(s.prepare_line, 2);
        assert_eq!(s.steps.len(), 9);
        assert_eq!(s.steps[0].1, Step::Set { site: 0, axis: Axis::Y });
        assert_eq!(s.steps[3].1, Step::Snapshot { label: "t_k".to_string() });
        assert_eq!(s.steps[8].1, Step::Readout { sites: vec![0, 1, 2] });
    }

    #[test]
    fn crlf_and_numeric_sites_accepted() {
        let text = "prepare bell\r\nset 1 y\r\nreadout 0 1\r\n";
        let s = parse_scenario_str(text).unwrap();
        assert_eq!(s.steps[0].1, Step::Set { site: 1, axis: Axis::Y });
    }

    #[test]
    fn empty_file_is_missing_prepare() {
        match parse_scenario_str("") {
            Err(Error::ScenarioParse { message, .. }) => {
                assert!(message.contains("missing prepare"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_prepare_cites_both_lines() {
        let text = "prepare bell\nprepare ghz\n";
        match parse_scenario_str(text) {
            Err(Error::ScenarioParse { line: 2, message }) => {
                assert!(message.contains("line 1"), "message: {message}");
            }
            other => panic!("expected duplicate-prepare error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_lines_name_line_and_token() {
        match parse_scenario_str("prepare bell\nset A q\n") {
            Err(Error::ScenarioParse { line: 2, message }) => {
                assert!(message.contains('q'), "message: {message}");
            }
            other => panic!("expected axis error, got {other:?}"),
        }
        match parse_scenario_str("prepare bell\nwiggle A\n") {
            Err(Error::ScenarioParse { line: 2, message }) => {
                assert!(message.contains("wiggle"), "message: {message}");
            }
            other => panic!("expected unknown-step error, got {other:?}"),
        }
        match parse_scenario_str("prepare bell\nset C x\n") {
            Err(Error::ScenarioParse { line: 2, message }) => {
                assert!(message.contains("out of range"), "message: {message}");
            }
            other => panic!("expected site-range error, got {other:?}"),
        }
    }

    #[test]
    fn steps_before_prepare_are_rejected() {
        match parse_scenario_str("set A x\nprepare ghz\n") {
            Err(Error::ScenarioParse { line: 1, message }) => {
                assert!(message.contains("before prepare"));
            }
            other => panic!("expected ordering error, got {other:?}"),
        }
    }
}
