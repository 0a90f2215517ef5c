//! JSON document formats: instances, solutions, posets, strategy
//! certificates, and play transcripts.
//!
//! All writers go through [`render`], which produces a canonical byte form:
//! pretty-printed with sorted keys and integer-only numbers (rationals are
//! `{"den": …, "num": …}` objects). Instance and solution elements are
//! 0-based ids (or labels where an alphabet is declared); poset members and
//! everything in the game formats are 1-based, matching their displays.

use std::fs;
use std::io;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use keller_kit::game::solve::Certificate;
use keller_kit::game::{CanonicalState, DistinctnessMode, Offer, Pick};
use keller_kit::poset::SubPoset;
use keller_kit::system::{Alphabet, Elem, SeqRow, SetSystem, SolutionMatrix};

/// Canonical byte rendering of a JSON value (`serde_json` maps are ordered,
/// so keys come out sorted).
pub fn render(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("tree of plain values");
    text.push('\n');
    text
}

/// Writes a canonical JSON file in one shot (nothing is written on earlier
/// command failures).
pub fn write_canonical(path: &Path, value: &Value) -> io::Result<()> {
    fs::write(path, render(value))
}

fn read_json(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn parse<'a, T: Deserialize<'a>>(text: &'a str, what: &str, path: &Path) -> Result<T, String> {
    serde_json::from_str(text).map_err(|e| format!("{} {} is not valid: {e}", what, path.display()))
}

/// An element in a document: a bare 0-based id or an alphabet label.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Token {
    Id(u32),
    Label(String),
}

/// Resolves a document or command-line token against the alphabet
/// (labels first, then bare ids).
pub fn resolve_token(alphabet: &Alphabet, token: &Token) -> Result<Elem, String> {
    match token {
        Token::Id(id) => {
            if (*id as usize) < alphabet.size() {
                Ok(Elem(*id))
            } else {
                Err(format!(
                    "element id {id} is outside the alphabet of size {}",
                    alphabet.size()
                ))
            }
        }
        Token::Label(label) => alphabet
            .lookup(label)
            .ok_or_else(|| format!("unknown element {label:?}")),
    }
}

#[derive(Deserialize)]
struct InstanceDoc {
    n: usize,
    k: usize,
    #[serde(default)]
    alphabet: Option<Vec<String>>,
    sets: Vec<Vec<Vec<Token>>>,
}

/// Reads an instance document into a system (shape checked, elements
/// resolved; cardinality and the deeper invariants are the caller's
/// validation step).
pub fn read_instance(path: &Path) -> Result<SetSystem, String> {
    let text = read_json(path)?;
    let doc: InstanceDoc = parse(&text, "instance", path)?;
    if doc.sets.len() != doc.n || doc.sets.iter().any(|row| row.len() != doc.k) {
        return Err(format!(
            "sets must form an {}x{} grid as declared by n and k",
            doc.n, doc.k
        ));
    }
    let alphabet = match doc.alphabet {
        Some(labels) => Alphabet::labeled(labels).map_err(|e| e.to_string())?,
        None => {
            let max_id = doc
                .sets
                .iter()
                .flatten()
                .flatten()
                .map(|t| match t {
                    Token::Id(id) => Ok(*id),
                    Token::Label(l) => Err(format!(
                        "element {l:?} needs an \"alphabet\" array to resolve"
                    )),
                })
                .collect::<Result<Vec<u32>, _>>()?
                .into_iter()
                .max();
            Alphabet::plain(max_id.map_or(1, |m| m as usize + 1))
        }
    };
    let cells: Vec<Vec<Vec<u32>>> = doc
        .sets
        .iter()
        .map(|row| {
            row.iter()
                .map(|set| {
                    set.iter()
                        .map(|t| resolve_token(&alphabet, t).map(|e| e.0))
                        .collect()
                })
                .collect()
        })
        .collect::<Result<_, String>>()?;
    SetSystem::new(alphabet, cells).map_err(|e| e.to_string())
}

/// Instance document for a system (ids, no labels).
pub fn instance_value(sys: &SetSystem) -> Value {
    let sets: Vec<Value> = (0..sys.n())
        .map(|i| {
            let row: Vec<Value> = (0..sys.k())
                .map(|j| Value::from(sys.set(i, j).iter().collect::<Vec<u32>>()))
                .collect();
            Value::from(row)
        })
        .collect();
    json!({ "k": sys.k(), "n": sys.n(), "sets": sets })
}

#[derive(Deserialize)]
struct SolutionDoc {
    n: usize,
    k: usize,
    rows: Vec<Vec<Token>>,
}

/// Reads a solution document, resolving elements against the instance's
/// alphabet. The declared shape is returned as-is for the verifier to judge.
pub fn read_solution(path: &Path, alphabet: &Alphabet) -> Result<SolutionMatrix, String> {
    let text = read_json(path)?;
    let doc: SolutionDoc = parse(&text, "solution", path)?;
    if doc.rows.len() != doc.n || doc.rows.iter().any(|row| row.len() != doc.k) {
        return Err(format!(
            "rows must form an {}x{} grid as declared by n and k",
            doc.n, doc.k
        ));
    }
    let rows = doc
        .rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|t| resolve_token(alphabet, t))
                .collect::<Result<Vec<Elem>, _>>()
                .map(SeqRow::new)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SolutionMatrix::new(rows))
}

pub fn solution_value(sol: &SolutionMatrix) -> Value {
    let rows: Vec<Value> = sol
        .rows
        .iter()
        .map(|r| Value::from(r.values.iter().map(|e| e.0).collect::<Vec<u32>>()))
        .collect();
    json!({ "k": sol.rows.first().map_or(0, |r| r.values.len()), "n": sol.rows.len(), "rows": rows })
}

#[derive(Deserialize)]
struct PosetDoc {
    n: usize,
    members: Vec<Vec<u32>>,
}

/// Reads a poset document; members are sets of 1-based elements of [n].
pub fn read_poset(path: &Path) -> Result<SubPoset, String> {
    let text = read_json(path)?;
    let doc: PosetDoc = parse(&text, "poset", path)?;
    if !(1..=keller_kit::poset::MAX_GROUND).contains(&doc.n) {
        return Err(format!(
            "ground-set size n = {} must lie in 1..={}",
            doc.n,
            keller_kit::poset::MAX_GROUND
        ));
    }
    let sets = doc
        .members
        .iter()
        .map(|member| {
            member
                .iter()
                .map(|&e| {
                    if (1..=doc.n as u32).contains(&e) {
                        Ok(e - 1)
                    } else {
                        Err(format!("member element {e} is outside 1..={}", doc.n))
                    }
                })
                .collect::<Result<Vec<u32>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    SubPoset::from_sets(doc.n, &sets).map_err(|e| e.to_string())
}

pub fn poset_value(p: &SubPoset) -> Value {
    let members: Vec<Value> = p
        .sets()
        .into_iter()
        .map(|set| Value::from(set.into_iter().map(|e| e + 1).collect::<Vec<u32>>()))
        .collect();
    json!({ "members": members, "n": p.n() })
}

fn mode_name(mode: DistinctnessMode) -> String {
    mode.to_string()
}

fn mode_from_name(name: &str) -> Result<DistinctnessMode, String> {
    match name {
        "per-round" => Ok(DistinctnessMode::PerRound),
        "end-only" => Ok(DistinctnessMode::EndOnly),
        other => Err(format!("unknown distinctness mode {other:?}")),
    }
}

fn one_based(elems: &[u32]) -> Vec<u32> {
    elems.iter().map(|e| e + 1).collect()
}

fn offer_value(offer: &Offer) -> Value {
    Value::from(
        offer
            .pairs()
            .iter()
            .map(|&(u, v)| Value::from(vec![u + 1, v + 1]))
            .collect::<Vec<Value>>(),
    )
}

fn pick_value(pick: &Pick) -> Value {
    Value::from(one_based(pick.choices()))
}

#[derive(Deserialize)]
struct MoveDoc {
    offer: Vec<(u32, u32)>,
    pick: Vec<u32>,
}

#[derive(Deserialize)]
struct EntryDoc {
    moves: Vec<MoveDoc>,
    state: Vec<Vec<u32>>,
}

#[derive(Deserialize)]
struct CertificateDoc {
    entries: Vec<EntryDoc>,
    mode: String,
    n: usize,
}

fn set_to_mask(set: &[u32], n: usize) -> Result<u32, String> {
    let mut mask = 0u32;
    for &e in set {
        if !(1..=n as u32).contains(&e) {
            return Err(format!("element {e} is outside 1..={n}"));
        }
        mask |= 1 << (e - 1);
    }
    Ok(mask)
}

fn shift_down(e: u32, n: usize, what: &str) -> Result<u32, String> {
    if (1..=n as u32).contains(&e) {
        Ok(e - 1)
    } else {
        Err(format!("{what} element {e} is outside 1..={n}"))
    }
}

/// Reads a strategy certificate; structural validation (canonical keys,
/// offers and picks fitting their positions) happens in the library.
pub fn read_certificate(path: &Path) -> Result<Certificate, String> {
    let text = read_json(path)?;
    let doc: CertificateDoc = parse(&text, "certificate", path)?;
    let mode = mode_from_name(&doc.mode)?;
    let mut parts = Vec::new();
    for entry in &doc.entries {
        let masks = entry
            .state
            .iter()
            .map(|set| set_to_mask(set, doc.n))
            .collect::<Result<Vec<u32>, _>>()?;
        let state = CanonicalState::from_masks(masks).map_err(|e| e.to_string())?;
        let mut moves = Vec::new();
        for m in &entry.moves {
            let pairs = m
                .offer
                .iter()
                .map(|&(u, v)| {
                    let u = shift_down(u, doc.n, "offer")?;
                    let v = shift_down(v, doc.n, "offer")?;
                    if u == v {
                        return Err("offer pair repeats an element".to_string());
                    }
                    Ok((u, v))
                })
                .collect::<Result<Vec<_>, String>>()?;
            let choices = m
                .pick
                .iter()
                .map(|&e| shift_down(e, doc.n, "pick"))
                .collect::<Result<Vec<u32>, _>>()?;
            moves.push((Offer::new(pairs), Pick::new(choices)));
        }
        parts.push((state, moves));
    }
    Certificate::from_parts(doc.n, mode, parts).map_err(|e| e.to_string())
}

pub fn certificate_value(cert: &Certificate) -> Value {
    let entries: Vec<Value> = cert
        .states()
        .map(|(state, moves)| {
            let sets: Vec<Value> = state
                .masks()
                .iter()
                .map(|&m| {
                    Value::from((0..32u32).filter(|b| m & (1 << b) != 0).map(|b| b + 1).collect::<Vec<u32>>())
                })
                .collect();
            let moves: Vec<Value> = moves
                .iter()
                .map(|(offer, pick)| json!({ "offer": offer_value(offer), "pick": pick_value(pick) }))
                .collect();
            json!({ "moves": moves, "state": sets })
        })
        .collect();
    json!({ "entries": entries, "mode": mode_name(cert.mode()), "n": cert.n() })
}

pub fn transcript_value(t: &keller_kit::game::play::Transcript) -> Value {
    use keller_kit::game::play::PlayOutcome;
    let rounds: Vec<Value> = t
        .rounds
        .iter()
        .map(|r| json!({ "offer": offer_value(&r.offer), "pick": pick_value(&r.pick) }))
        .collect();
    let outcome = match t.outcome {
        PlayOutcome::ChooserWins => json!({ "type": "chooser-wins" }),
        PlayOutcome::Collision { row_a, row_b, round } => json!({
            "round": round + 1,
            "row_a": row_a + 1,
            "row_b": row_b + 1,
            "type": "collision",
        }),
    };
    let final_sets: Vec<Value> = t
        .final_sets
        .iter()
        .map(|set| Value::from(one_based(set)))
        .collect();
    json!({
        "final_sets": final_sets,
        "mode": mode_name(t.mode),
        "n": t.n,
        "outcome": outcome,
        "rounds": rounds,
    })
}

/// A set of 1-based elements rendered `{1,3}` for report lines.
pub fn braced_set(mask: u32) -> String {
    let elems: Vec<String> = (0..32u32)
        .filter(|b| mask & (1 << b) != 0)
        .map(|b| (b + 1).to_string())
        .collect();
    format!("{{{}}}", elems.join(","))
}
