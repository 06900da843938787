use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::divisors::{DivisorError, DivisorSubgroup, InvariantDivisor};
use crate::fan::{Fan, FanError, LatticeVector};

pub const FORMAT_TAG: &str = "toricfan";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// Text description of a fan with optional boundary, named divisors and named
/// subgroups.
///
/// ```text
/// toricfan 1
/// rank 2
/// ray 1 0
/// ray 1 2
/// cone 0 1
/// boundary 1/2 0
/// divisor W 1 0
/// subgroup N W
/// ```
///
/// Blank lines and text after `#` are ignored. The header must come first and
/// `rank` before any ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FanDocument {
    pub version: u32,
    pub rank: usize,
    pub rays: Vec<Vec<BigInt>>,
    pub cones: Vec<Vec<usize>>,
    pub boundary: Option<Vec<BigRational>>,
    pub divisors: BTreeMap<String, Vec<BigInt>>,
    pub subgroups: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelError {
    #[error("unknown label {0}")]
    Unknown(String),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let content = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in content.char_indices().enumerate() {
        if ch.is_whitespace() {
            if let Some((b, c)) = start.take() {
                tokens.push(Token {
                    text: &content[b..byte],
                    column: c + 1,
                });
            }
        } else if start.is_none() {
            start = Some((byte, col));
        }
    }
    if let Some((b, c)) = start {
        tokens.push(Token {
            text: &content[b..],
            column: c + 1,
        });
    }
    tokens
}

impl FanDocument {
    pub fn from_fan(f: &Fan) -> Self {
        FanDocument {
            version: FORMAT_VERSION,
            rank: f.ambient_rank(),
            rays: f.rays().iter().map(|r| r.coords().to_vec()).collect(),
            cones: f.cones().to_vec(),
            boundary: None,
            divisors: BTreeMap::new(),
            subgroups: BTreeMap::new(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut doc: Option<FanDocument> = None;
        let mut rank_seen = false;
        let mut boundary_line = 0;
        let mut divisor_lines = Vec::new();
        let mut subgroup_refs = Vec::new();
        let mut cone_refs = Vec::new();

        for (i, line) in text.lines().enumerate() {
            let ln = i + 1;
            let tokens = tokenize(line);
            let Some(head) = tokens.first() else {
                continue;
            };
            let err = |t: &Token, message: String| ParseError {
                line: ln,
                column: t.column,
                message,
            };
            let Some(d) = doc.as_mut() else {
                if head.text != FORMAT_TAG {
                    return Err(err(
                        head,
                        format!("expected header '{FORMAT_TAG} {FORMAT_VERSION}'"),
                    ));
                }
                let v = tokens
                    .get(1)
                    .ok_or_else(|| err(head, "missing version".into()))?;
                let version: u32 = v
                    .text
                    .parse()
                    .map_err(|_| err(v, format!("bad version '{}'", v.text)))?;
                if version != FORMAT_VERSION {
                    return Err(err(v, format!("unsupported version {version}")));
                }
                expect_len(&tokens, 2, ln)?;
                doc = Some(FanDocument {
                    version,
                    rank: 0,
                    rays: Vec::new(),
                    cones: Vec::new(),
                    boundary: None,
                    divisors: BTreeMap::new(),
                    subgroups: BTreeMap::new(),
                });
                continue;
            };
            let args = &tokens[1..];
            match head.text {
                "rank" => {
                    if rank_seen {
                        return Err(err(head, "duplicate rank".into()));
                    }
                    expect_len(&tokens, 2, ln)?;
                    d.rank = parse_num(&tokens[1], ln)?;
                    rank_seen = true;
                }
                "ray" => {
                    if !rank_seen {
                        return Err(err(head, "ray before rank".into()));
                    }
                    expect_len(&tokens, d.rank + 1, ln)?;
                    d.rays.push(parse_ints(args, ln)?);
                }
                "cone" => {
                    if args.is_empty() {
                        return Err(err(head, "cone needs at least one ray index".into()));
                    }
                    let idx = args
                        .iter()
                        .map(|t| parse_num::<usize>(t, ln).map(|v| (v, t.column)))
                        .collect::<Result<Vec<_>, _>>()?;
                    d.cones.push(idx.iter().map(|x| x.0).collect());
                    cone_refs.push((ln, idx));
                }
                "boundary" => {
                    if d.boundary.is_some() {
                        return Err(err(head, "duplicate boundary".into()));
                    }
                    let b = args
                        .iter()
                        .map(|t| {
                            t.text
                                .parse::<BigRational>()
                                .map_err(|_| err(t, format!("bad rational '{}'", t.text)))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    d.boundary = Some(b);
                    boundary_line = ln;
                }
                "divisor" => {
                    let label = args
                        .first()
                        .ok_or_else(|| err(head, "missing label".into()))?;
                    if d.divisors.contains_key(label.text) {
                        return Err(err(label, format!("duplicate divisor {}", label.text)));
                    }
                    d.divisors
                        .insert(label.text.to_string(), parse_ints(&args[1..], ln)?);
                    divisor_lines.push((ln, label.text.to_string()));
                }
                "subgroup" => {
                    let label = args
                        .first()
                        .ok_or_else(|| err(head, "missing label".into()))?;
                    if d.subgroups.contains_key(label.text) {
                        return Err(err(label, format!("duplicate subgroup {}", label.text)));
                    }
                    let members: Vec<String> =
                        args[1..].iter().map(|t| t.text.to_string()).collect();
                    subgroup_refs.push((
                        ln,
                        args[1..]
                            .iter()
                            .map(|t| (t.text.to_string(), t.column))
                            .collect::<Vec<_>>(),
                    ));
                    d.subgroups.insert(label.text.to_string(), members);
                }
                other => return Err(err(head, format!("unknown keyword '{other}'"))),
            }
        }

        let Some(d) = doc else {
            return Err(ParseError {
                line: 1,
                column: 1,
                message: "empty document".into(),
            });
        };
        if !rank_seen {
            return Err(ParseError {
                line: 1,
                column: 1,
                message: "missing rank".into(),
            });
        }
        let k = d.rays.len();
        for (ln, idx) in &cone_refs {
            if let Some((i, col)) = idx.iter().find(|(i, _)| *i >= k) {
                return Err(ParseError {
                    line: *ln,
                    column: *col,
                    message: format!("ray index {i} out of range (have {k} rays)"),
                });
            }
        }
        if let Some(b) = &d.boundary {
            if b.len() != k {
                return Err(ParseError {
                    line: boundary_line,
                    column: 1,
                    message: format!("boundary has {} entries, expected {k}", b.len()),
                });
            }
        }
        for (ln, label) in &divisor_lines {
            let n = d.divisors[label].len();
            if n != k {
                return Err(ParseError {
                    line: *ln,
                    column: 1,
                    message: format!("divisor {label} has {n} coefficients, expected {k}"),
                });
            }
        }
        for (ln, members) in &subgroup_refs {
            if let Some((m, col)) = members.iter().find(|(m, _)| !d.divisors.contains_key(m)) {
                return Err(ParseError {
                    line: *ln,
                    column: *col,
                    message: format!("unknown divisor {m}"),
                });
            }
        }
        Ok(d)
    }

    pub fn to_fan(&self) -> Result<Fan, FanError> {
        Fan::new(
            self.rank,
            self.rays.iter().cloned().map(LatticeVector::new).collect(),
            self.cones.clone(),
        )
    }

    pub fn divisor(&self, label: &str) -> Result<InvariantDivisor, LabelError> {
        self.divisors
            .get(label)
            .map(|c| InvariantDivisor::new(c.clone()))
            .ok_or_else(|| LabelError::Unknown(label.to_string()))
    }

    /// The named subgroup, or, failing that, the subgroup generated by a single
    /// named divisor.
    pub fn subgroup(&self, f: &Fan, label: &str) -> Result<DivisorSubgroup, LabelError> {
        let members = match self.subgroups.get(label) {
            Some(m) => m.clone(),
            None if self.divisors.contains_key(label) => vec![label.to_string()],
            None => return Err(LabelError::Unknown(label.to_string())),
        };
        let gens = members
            .iter()
            .map(|m| self.divisor(m))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(DivisorSubgroup::new(f, gens)?)
    }

    /// Divisor labels of a subgroup (or the label itself for a bare divisor).
    pub fn generator_labels(&self, label: &str) -> Vec<String> {
        self.subgroups
            .get(label)
            .cloned()
            .unwrap_or_else(|| vec![label.to_string()])
    }
}

fn expect_len(tokens: &[Token], n: usize, line: usize) -> Result<(), ParseError> {
    if tokens.len() == n {
        return Ok(());
    }
    let column = tokens.get(n).or(tokens.last()).map_or(1, |t| {
        t.column + if tokens.len() < n { t.text.len() } else { 0 }
    });
    Err(ParseError {
        line,
        column,
        message: format!(
            "expected {} values after '{}', found {}",
            n - 1,
            tokens[0].text,
            tokens.len() - 1
        ),
    })
}

fn parse_num<T: std::str::FromStr>(t: &Token, line: usize) -> Result<T, ParseError> {
    t.text.parse().map_err(|_| ParseError {
        line,
        column: t.column,
        message: format!("bad number '{}'", t.text),
    })
}

fn parse_ints(tokens: &[Token], line: usize) -> Result<Vec<BigInt>, ParseError> {
    tokens.iter().map(|t| parse_num(t, line)).collect()
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for FanDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        writeln!(s, "{FORMAT_TAG} {}", self.version)?;
        writeln!(s, "rank {}", self.rank)?;
        for r in &self.rays {
            writeln!(s, "ray {}", join(r))?;
        }
        for c in &self.cones {
            writeln!(s, "cone {}", join(c))?;
        }
        if let Some(b) = &self.boundary {
            writeln!(s, "boundary {}", join(b))?;
        }
        for (label, coeffs) in &self.divisors {
            writeln!(s, "divisor {label} {}", join(coeffs))?;
        }
        for (label, members) in &self.subgroups {
            writeln!(s, "subgroup {label} {}", members.join(" "))?;
        }
        f.write_str(&s)
    }
}
