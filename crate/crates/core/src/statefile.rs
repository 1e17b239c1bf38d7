//! Text and JSON representations of automaton states.
//!
//! The text format is line oriented: a header `kind n N`, then one line
//! per site, `l : x_1 .. x_n | xbar_1 .. xbar_n` for type D or
//! `l : x_1 .. x_n` for type A.  `#` starts a comment.  Serialization is
//! canonical, so `serialize(parse(s)) == s` for canonical files.

use crate::basic_array::Kind;
use crate::crystal::{ElementA, ElementD};
use crate::dynamics::AutomatonState;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::ParseError { line, message: message.into() }
}

fn parse_ints(line_no: usize, s: &str) -> Result<Vec<i64>> {
    s.split_whitespace()
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| parse_err(line_no, format!("expected integer, found {t:?}")))
        })
        .collect()
}

/// Parses the text state format.
pub fn parse_state(input: &str) -> Result<AutomatonState> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| parse_err(0, "empty state file"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(parse_err(hline, "header must be `kind n N`"));
    }
    let kind = match parts[0] {
        "A" => Kind::A,
        "D" => Kind::D,
        other => return Err(parse_err(hline, format!("unknown kind {other:?}"))),
    };
    let n: usize = parts[1]
        .parse()
        .map_err(|_| parse_err(hline, format!("bad rank {:?}", parts[1])))?;
    let sites_n: usize = parts[2]
        .parse()
        .map_err(|_| parse_err(hline, format!("bad site count {:?}", parts[2])))?;

    let mut sites_a = Vec::new();
    let mut sites_d = Vec::new();
    for _ in 0..sites_n {
        let (lno, line) = lines
            .next()
            .ok_or_else(|| parse_err(0, format!("expected {sites_n} site lines")))?;
        let (cap_str, rest) = line
            .split_once(':')
            .ok_or_else(|| parse_err(lno, "site line must be `l : coords`"))?;
        let cap: i64 = cap_str
            .trim()
            .parse()
            .map_err(|_| parse_err(lno, format!("bad capacity {:?}", cap_str.trim())))?;
        match kind {
            Kind::A => {
                let coords = parse_ints(lno, rest)?;
                if coords.len() != n {
                    return Err(parse_err(lno, format!("expected {n} coordinates")));
                }
                let site = ElementA::new(coords).map_err(|e| parse_err(lno, e.to_string()))?;
                if site.shape() != cap {
                    return Err(parse_err(
                        lno,
                        format!("coordinates sum to {}, capacity says {cap}", site.shape()),
                    ));
                }
                sites_a.push(site);
            }
            Kind::D => {
                let (up_str, low_str) = rest
                    .split_once('|')
                    .ok_or_else(|| parse_err(lno, "type-D site needs `upper | lower`"))?;
                let upper = parse_ints(lno, up_str)?;
                let lower = parse_ints(lno, low_str)?;
                if upper.len() != n || lower.len() != n {
                    return Err(parse_err(lno, format!("expected {n} coordinates per side")));
                }
                let site =
                    ElementD::new(upper, lower).map_err(|e| parse_err(lno, e.to_string()))?;
                if site.shape() != cap {
                    return Err(parse_err(
                        lno,
                        format!("coordinates sum to {}, capacity says {cap}", site.shape()),
                    ));
                }
                sites_d.push(site);
            }
        }
    }
    if let Some((lno, _)) = lines.next() {
        return Err(parse_err(lno, "trailing content after the last site"));
    }
    match kind {
        Kind::A => AutomatonState::new_a(sites_a),
        Kind::D => AutomatonState::new_d(sites_d),
    }
}

fn join(coords: &[i64]) -> String {
    coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

/// Canonical text serialization of a state.
pub fn serialize_state(state: &AutomatonState) -> String {
    let mut out = String::new();
    match state {
        AutomatonState::A(sites) => {
            out.push_str(&format!("A {} {}\n", state.rank(), sites.len()));
            for s in sites {
                out.push_str(&format!("{} : {}\n", s.shape(), join(s.coords())));
            }
        }
        AutomatonState::D(sites) => {
            out.push_str(&format!("D {} {}\n", state.rank(), sites.len()));
            for s in sites {
                out.push_str(&format!(
                    "{} : {} | {}\n",
                    s.shape(),
                    join(s.upper()),
                    join(s.lower())
                ));
            }
        }
    }
    out
}

/// One site in the JSON mirror of the state format.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SiteJson {
    pub capacity: i64,
    pub upper: Vec<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower: Option<Vec<i64>>,
}

/// JSON mirror of the state format.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct StateJson {
    pub kind: String,
    pub n: usize,
    pub sites: Vec<SiteJson>,
}

impl StateJson {
    pub fn from_state(state: &AutomatonState) -> Self {
        let sites = match state {
            AutomatonState::A(sites) => sites
                .iter()
                .map(|s| SiteJson { capacity: s.shape(), upper: s.coords().to_vec(), lower: None })
                .collect(),
            AutomatonState::D(sites) => sites
                .iter()
                .map(|s| SiteJson {
                    capacity: s.shape(),
                    upper: s.upper().to_vec(),
                    lower: Some(s.lower().to_vec()),
                })
                .collect(),
        };
        StateJson {
            kind: match state.kind() {
                Kind::A => "A".into(),
                Kind::D => "D".into(),
            },
            n: state.rank(),
            sites,
        }
    }

    pub fn into_state(self) -> Result<AutomatonState> {
        match self.kind.as_str() {
            "A" => AutomatonState::new_a(
                self.sites
                    .into_iter()
                    .map(|s| ElementA::new(s.upper))
                    .collect::<Result<Vec<_>>>()?,
            ),
            "D" => AutomatonState::new_d(
                self.sites
                    .into_iter()
                    .map(|s| {
                        let lower = s.lower.ok_or_else(|| {
                            Error::ParseError {
                                line: 0,
                                message: "type-D site lacks lower coordinates".into(),
                            }
                        })?;
                        ElementD::new(s.upper, lower)
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
            other => Err(Error::ParseError {
                line: 0,
                message: format!("unknown kind {other:?}"),
            }),
        }
    }
}
