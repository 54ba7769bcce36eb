//! File formats.
//!
//! Game files and relation files are TOML. A game file looks like
//!
//! ```toml
//! players = 2
//! outcomes = [{ label = "a", payoff = [2, 1] }, { label = "b", payoff = ["1/2", 0] }]
//! matrix = [["a", "b"], ["b", "a"]]
//! pref1 = "payoff"                      # greater own payoff component
//! pref2 = { order = [["a", "b"]] }      # a < b, must be a strict order
//! # or    { acyclic = [["a", "b"]] }    # closed transitively before use
//! ```
//!
//! Outcomes may also be bare labels (`outcomes = ["X", "Y"]`) when no
//! payoffs are needed. A relation file has `elements` and `pairs`, each pair
//! `[lower, upper]`.
//!
//! Arena files are line based; `#` starts a comment:
//!
//! ```text
//! initial 0
//! # id owner priority successors
//! 0 1 2 1,2
//! 1 2 1 0
//! 2 2 0 2
//! # payoff priority p1 p2
//! payoff 0 1 0
//! payoff 1 -1/2 3
//! payoff 2 0 0
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::games::{payoff_prefs, GameError, MatrixGame, MatrixGameForm, PayoffTable, Player};
use crate::poset::{
    transitive_closure, validate_order, BinaryRelation, OrderError, Poset, RelationSpec, Subset,
};
use crate::priority::{Arena, ArenaError, PriorityGame};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("{0}")]
    Toml(String),
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("unknown outcome `{0}`")]
    UnknownLabel(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("only two-player games are supported, found players = {0}")]
    Players(u32),
    #[error("not a rational number: `{0}`")]
    BadNumber(String),
    #[error("unknown preference keyword `{0}` (expected \"payoff\")")]
    UnknownKeyword(String),
    #[error("no preference given for {0} and the outcomes carry no payoffs")]
    MissingPreference(Player),
    #[error("outcomes must either all carry payoffs or none")]
    PartialPayoffs,
    #[error("this command needs payoff pairs on every outcome")]
    MissingPayoffs,
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("preference of {player}: {detail}")]
    Order {
        player: Player,
        source: OrderError,
        detail: String,
    },
    #[error(transparent)]
    Relation(#[from] OrderError),
    #[error(transparent)]
    Arena(#[from] ArenaError),
}

/// Exact rational, written as an integer or `"p/q"` / `"1.25"` string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberRepr {
    Int(i64),
    Text(String),
}

impl NumberRepr {
    pub fn to_rational(&self) -> Result<Rational64, FormatError> {
        match self {
            NumberRepr::Int(i) => Ok(Rational64::from_integer(*i)),
            NumberRepr::Text(s) => parse_rational(s),
        }
    }

    pub fn from_rational(r: Rational64) -> Self {
        if r.is_integer() {
            NumberRepr::Int(r.to_integer())
        } else {
            NumberRepr::Text(r.to_string())
        }
    }
}

/// Parses `7`, `-3/4` or `2.25` exactly.
pub fn parse_rational(s: &str) -> Result<Rational64, FormatError> {
    let bad = || FormatError::BadNumber(s.to_string());
    let t = s.trim();
    if let Some((num, den)) = t.split_once('/') {
        let num: i64 = num.trim().parse().map_err(|_| bad())?;
        let den: i64 = den.trim().parse().map_err(|_| bad())?;
        if den == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(num, den));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 18 {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let whole: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let scale = 10i64.pow(frac.len() as u32);
        let frac: i64 = frac.parse().map_err(|_| bad())?;
        let magnitude = whole
            .abs()
            .checked_mul(scale)
            .and_then(|w| w.checked_add(frac))
            .ok_or_else(bad)?;
        let signed = if negative { -magnitude } else { magnitude };
        return Ok(Rational64::new(signed, scale));
    }
    t.parse::<i64>()
        .map(Rational64::from_integer)
        .map_err(|_| bad())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OutcomeEntry {
    Label(String),
    WithPayoff {
        label: String,
        payoff: [NumberRepr; 2],
    },
}

impl OutcomeEntry {
    fn label(&self) -> &str {
        match self {
            OutcomeEntry::Label(l) | OutcomeEntry::WithPayoff { label: l, .. } => l,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PrefEntry {
    Keyword(String),
    Order { order: Vec<[String; 2]> },
    Acyclic { acyclic: Vec<[String; 2]> },
}

/// Raw TOML shape of a game file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameFile {
    #[serde(default = "two")]
    pub players: u32,
    pub outcomes: Vec<OutcomeEntry>,
    pub matrix: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pref1: Option<PrefEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pref2: Option<PrefEntry>,
}

fn two() -> u32 {
    2
}

/// Where a player's preference comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrefSource {
    /// Greater own payoff component.
    Payoff,
    /// An explicit strict order.
    Order(BinaryRelation),
    /// An acyclic relation, used through its transitive closure.
    Acyclic(BinaryRelation),
}

/// A parsed game file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameDocument {
    pub form: MatrixGameForm,
    pub payoffs: Option<PayoffTable>,
    pub pref1: Option<PrefSource>,
    pub pref2: Option<PrefSource>,
}

/// A preference ready for use, plus the relation it was built from.
#[derive(Debug, Clone)]
pub struct ResolvedPref {
    pub order: Poset,
    pub original: BinaryRelation,
    pub closed: bool,
}

impl GameDocument {
    pub fn pref_source(&self, player: Player) -> Option<&PrefSource> {
        match player {
            Player::One => self.pref1.as_ref(),
            Player::Two => self.pref2.as_ref(),
        }
    }

    /// The strict order for `player`; defaults to payoff comparison when
    /// payoffs exist.
    pub fn resolve_pref(&self, player: Player) -> Result<ResolvedPref, FormatError> {
        let labels = self.form.labels().to_vec();
        let by_payoff = || -> Result<ResolvedPref, FormatError> {
            let pay = self
                .payoffs
                .as_ref()
                .ok_or(FormatError::MissingPreference(player))?;
            let (p1, p2) = payoff_prefs(pay);
            let order = if player == Player::One { p1 } else { p2 };
            Ok(ResolvedPref {
                original: order.relation(),
                order,
                closed: false,
            })
        };
        let resolved = match self.pref_source(player) {
            None | Some(PrefSource::Payoff) => by_payoff()?,
            Some(PrefSource::Order(r)) => ResolvedPref {
                order: validate_order(r).map_err(|source| order_error(player, source, &labels))?,
                original: r.clone(),
                closed: false,
            },
            Some(PrefSource::Acyclic(r)) => ResolvedPref {
                order: transitive_closure(r)
                    .map_err(|source| order_error(player, source, &labels))?,
                original: r.clone(),
                closed: true,
            },
        };
        Ok(ResolvedPref {
            order: resolved.order.with_labels(labels)?,
            ..resolved
        })
    }

    pub fn game(&self) -> Result<MatrixGame, FormatError> {
        let p1 = self.resolve_pref(Player::One)?.order;
        let p2 = self.resolve_pref(Player::Two)?.order;
        Ok(MatrixGame::new(self.form.clone(), p1, p2)?)
    }

    pub fn require_payoffs(&self) -> Result<&PayoffTable, FormatError> {
        self.payoffs.as_ref().ok_or(FormatError::MissingPayoffs)
    }
}

fn order_error(player: Player, source: OrderError, labels: &[String]) -> FormatError {
    let detail = describe_order_error(&source, labels);
    FormatError::Order {
        player,
        source,
        detail,
    }
}

/// [`OrderError`] message with element labels in place of indices.
pub fn describe_order_error(e: &OrderError, labels: &[String]) -> String {
    let l = |i: &usize| labels.get(*i).cloned().unwrap_or_else(|| i.to_string());
    match e {
        OrderError::NotIrreflexive(x) => {
            format!("relation is not irreflexive: {} < {}", l(x), l(x))
        }
        OrderError::NotTransitive(x, y, z) => {
            format!(
                "relation is not transitive: {} < {} and {} < {} but not {} < {}",
                l(x),
                l(y),
                l(y),
                l(z),
                l(x),
                l(z)
            )
        }
        OrderError::CyclicRelation(c) => {
            let mut names: Vec<String> = c.iter().map(l).collect();
            if let Some(first) = names.first().cloned() {
                names.push(first);
            }
            format!("relation has a cycle: {}", names.join(" < "))
        }
        other => other.to_string(),
    }
}

fn label_index(labels: &[String]) -> Result<HashMap<&str, usize>, FormatError> {
    let mut map = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if map.insert(l.as_str(), i).is_some() {
            return Err(FormatError::DuplicateLabel(l.clone()));
        }
    }
    Ok(map)
}

fn lookup(map: &HashMap<&str, usize>, label: &str) -> Result<usize, FormatError> {
    map.get(label)
        .copied()
        .ok_or_else(|| FormatError::UnknownLabel(label.to_string()))
}

fn relation_from_pairs(
    map: &HashMap<&str, usize>,
    size: usize,
    pairs: &[[String; 2]],
) -> Result<BinaryRelation, FormatError> {
    let mut r = BinaryRelation::new(size);
    for [lo, hi] in pairs {
        r.add(lookup(map, lo)?, lookup(map, hi)?)?;
    }
    Ok(r)
}

fn pairs_of(r: &BinaryRelation, labels: &[String]) -> Vec<[String; 2]> {
    r.pairs()
        .map(|(x, y)| [labels[x].clone(), labels[y].clone()])
        .collect()
}

pub fn parse_game(text: &str) -> Result<GameDocument, FormatError> {
    let file: GameFile = toml::from_str(text).map_err(|e| FormatError::Toml(e.to_string()))?;
    game_from_file(&file)
}

pub fn game_from_file(file: &GameFile) -> Result<GameDocument, FormatError> {
    if file.players != 2 {
        return Err(FormatError::Players(file.players));
    }
    let labels: Vec<String> = file
        .outcomes
        .iter()
        .map(|o| o.label().to_string())
        .collect();
    let map = label_index(&labels)?;
    let with_pay = file
        .outcomes
        .iter()
        .filter(|o| matches!(o, OutcomeEntry::WithPayoff { .. }))
        .count();
    let payoffs = match with_pay {
        0 => None,
        k if k == file.outcomes.len() => Some(PayoffTable::new(
            file.outcomes
                .iter()
                .map(|o| match o {
                    OutcomeEntry::WithPayoff { payoff: [a, b], .. } => {
                        Ok((a.to_rational()?, b.to_rational()?))
                    }
                    OutcomeEntry::Label(_) => unreachable!(),
                })
                .collect::<Result<_, FormatError>>()?,
        )),
        _ => return Err(FormatError::PartialPayoffs),
    };
    let matrix = file
        .matrix
        .iter()
        .map(|row| {
            row.iter()
                .map(|l| lookup(&map, l))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let form = MatrixGameForm::new(labels.clone(), matrix)?;
    let pref =
        |entry: &Option<PrefEntry>| -> Result<Option<PrefSource>, FormatError> {
            Ok(match entry {
                None => None,
                Some(PrefEntry::Keyword(k)) if k == "payoff" => Some(PrefSource::Payoff),
                Some(PrefEntry::Keyword(k)) => return Err(FormatError::UnknownKeyword(k.clone())),
                Some(PrefEntry::Order { order }) => Some(PrefSource::Order(relation_from_pairs(
                    &map,
                    labels.len(),
                    order,
                )?)),
                Some(PrefEntry::Acyclic { acyclic }) => Some(PrefSource::Acyclic(
                    relation_from_pairs(&map, labels.len(), acyclic)?,
                )),
            })
        };
    Ok(GameDocument {
        pref1: pref(&file.pref1)?,
        pref2: pref(&file.pref2)?,
        form,
        payoffs,
    })
}

pub fn game_to_file(doc: &GameDocument) -> GameFile {
    let labels = doc.form.labels();
    let outcomes = labels
        .iter()
        .enumerate()
        .map(|(i, l)| match &doc.payoffs {
            None => OutcomeEntry::Label(l.clone()),
            Some(t) => {
                let (a, b) = t.pair(i);
                OutcomeEntry::WithPayoff {
                    label: l.clone(),
                    payoff: [NumberRepr::from_rational(a), NumberRepr::from_rational(b)],
                }
            }
        })
        .collect();
    let matrix = doc
        .form
        .matrix()
        .into_iter()
        .map(|row| row.into_iter().map(|o| labels[o].clone()).collect())
        .collect();
    let pref = |p: &Option<PrefSource>| {
        p.as_ref().map(|p| match p {
            PrefSource::Payoff => PrefEntry::Keyword("payoff".into()),
            PrefSource::Order(r) => PrefEntry::Order {
                order: pairs_of(r, labels),
            },
            PrefSource::Acyclic(r) => PrefEntry::Acyclic {
                acyclic: pairs_of(r, labels),
            },
        })
    };
    GameFile {
        players: 2,
        outcomes,
        matrix,
        pref1: pref(&doc.pref1),
        pref2: pref(&doc.pref2),
    }
}

pub fn write_game(doc: &GameDocument) -> String {
    toml::to_string(&game_to_file(doc)).expect("game files serialize")
}

/// A parsed relation file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationDocument {
    pub labels: Vec<String>,
    pub relation: BinaryRelation,
}

pub fn parse_relation(text: &str) -> Result<RelationDocument, FormatError> {
    let spec: RelationSpec = toml::from_str(text).map_err(|e| FormatError::Toml(e.to_string()))?;
    let map = label_index(&spec.elements)?;
    let relation = relation_from_pairs(&map, spec.elements.len(), &spec.pairs)?;
    Ok(RelationDocument {
        labels: spec.elements,
        relation,
    })
}

pub fn write_relation(doc: &RelationDocument) -> String {
    let spec = RelationSpec {
        elements: doc.labels.clone(),
        pairs: pairs_of(&doc.relation, &doc.labels),
    };
    toml::to_string(&spec).expect("relation files serialize")
}

/// Parses a set of labels such as `{1,2,3}`, `1,2,3`, `{}` or `-`.
pub fn parse_label_set(text: &str, labels: &[String]) -> Result<Subset, FormatError> {
    let map = label_index(labels)?;
    let inner = text
        .trim()
        .trim_start_matches('{')
        .trim_end_matches('}')
        .trim();
    let mut s = Subset::empty(labels.len());
    if inner.is_empty() || inner == "-" {
        return Ok(s);
    }
    for item in inner.split(',') {
        s.insert(lookup(&map, item.trim())?);
    }
    Ok(s)
}

pub fn format_label_set(s: &Subset, labels: &[String]) -> String {
    let items: Vec<&str> = s.iter().map(|i| labels[i].as_str()).collect();
    format!("{{{}}}", items.join(","))
}

pub fn parse_arena(text: &str) -> Result<PriorityGame, FormatError> {
    struct Vertex {
        owner: Player,
        priority: u32,
        succ: Vec<usize>,
        line: usize,
    }
    let mut vertices: BTreeMap<usize, Vertex> = BTreeMap::new();
    let mut payoff = BTreeMap::new();
    let mut payoff_line = BTreeMap::new();
    let mut initial = None;
    let mut initial_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| FormatError::Line { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        match fields[0] {
            "initial" => {
                let [_, v] = fields[..] else {
                    return Err(err("expected `initial <vertex>`".into()));
                };
                initial = Some(
                    v.parse::<usize>()
                        .map_err(|_| err(format!("bad vertex `{v}`")))?,
                );
                initial_line = line;
            }
            "payoff" => {
                let [_, p, a, b] = fields[..] else {
                    return Err(err("expected `payoff <priority> <p1> <p2>`".into()));
                };
                let p: u32 = p.parse().map_err(|_| err(format!("bad priority `{p}`")))?;
                let pair = (
                    parse_rational(a).map_err(|e| err(e.to_string()))?,
                    parse_rational(b).map_err(|e| err(e.to_string()))?,
                );
                if payoff.insert(p, pair).is_some() {
                    return Err(err(format!("payoff for priority {p} given twice")));
                }
                payoff_line.insert(p, line);
            }
            _ => {
                let [id, owner, priority, succ] = fields[..] else {
                    return Err(err("expected `<id> <owner> <priority> <successors>`".into()));
                };
                let id: usize = id
                    .parse()
                    .map_err(|_| err(format!("bad vertex id `{id}`")))?;
                let owner = match owner {
                    "1" => Player::One,
                    "2" => Player::Two,
                    o => return Err(err(format!("owner must be 1 or 2, found `{o}`"))),
                };
                let priority = priority
                    .parse()
                    .map_err(|_| err(format!("bad priority `{priority}`")))?;
                let succ = succ
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|s| {
                        s.parse::<usize>()
                            .map_err(|_| err(format!("bad successor `{s}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let vertex = Vertex {
                    owner,
                    priority,
                    succ,
                    line,
                };
                if vertices.insert(id, vertex).is_some() {
                    return Err(err(format!("vertex {id} defined twice")));
                }
            }
        }
    }
    let n = vertices.len();
    if let Some((pos, &id)) = vertices.keys().enumerate().find(|&(pos, &id)| pos != id) {
        return Err(FormatError::Line {
            line: vertices[&id].line,
            message: format!("vertex ids must be 0..{n}; vertex {pos} is missing"),
        });
    }
    let initial = initial.ok_or(FormatError::Line {
        line: 0,
        message: "missing `initial` line".into(),
    })?;
    let lines: Vec<usize> = vertices.values().map(|v| v.line).collect();
    let mut owner = Vec::with_capacity(n);
    let mut priority = Vec::with_capacity(n);
    let mut succ = Vec::with_capacity(n);
    for v in vertices.into_values() {
        owner.push(v.owner);
        priority.push(v.priority);
        succ.push(v.succ);
    }
    // point at the offending line where there is one
    let locate = |e: ArenaError| {
        let line = match e {
            ArenaError::DeadEnd(v) | ArenaError::SuccessorOutOfRange { vertex: v, .. } => lines[v],
            ArenaError::InitialOutOfRange(_) => initial_line,
            ArenaError::UnusedPayoff(p) => payoff_line[&p],
            e => return FormatError::Arena(e),
        };
        FormatError::Line {
            line,
            message: e.to_string(),
        }
    };
    let arena = Arena::new(owner, succ, priority, initial).map_err(locate)?;
    PriorityGame::new(arena, payoff).map_err(locate)
}

pub fn write_arena(game: &PriorityGame) -> String {
    let a = game.arena();
    let mut out = String::new();
    writeln!(out, "initial {}", a.initial()).unwrap();
    writeln!(out, "# id owner priority successors").unwrap();
    for v in 0..a.len() {
        let succ: Vec<String> = a.successors(v).iter().map(usize::to_string).collect();
        writeln!(
            out,
            "{v} {} {} {}",
            a.owner(v).number(),
            a.priority(v),
            succ.join(",")
        )
        .unwrap();
    }
    writeln!(out, "# payoff priority p1 p2").unwrap();
    for (p, (x, y)) in game.payoff() {
        writeln!(out, "payoff {p} {x} {y}").unwrap();
    }
    out
}
