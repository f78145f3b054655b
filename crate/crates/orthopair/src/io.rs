//! The workspace file format: one JSON document holding a space, named
//! module families, pairings, submodule families, and bare matrices, plus
//! an optional embedded reproducer. Scalars are written as strings so
//! rationals round-trip exactly; integers may also appear as JSON numbers
//! on input.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::pairing::Pairing;
use crate::scalar::{Ring, Scalar};
use crate::sheaf::SheafModule;
use crate::submodule::SubmoduleBasis;
use crate::topology::FiniteSpace;

/// A submodule of one sheaf, given per open. Opens without columns carry
/// the zero submodule.
#[derive(Clone, Debug)]
pub struct SubmoduleFamily {
    pub sheaf: String,
    pub at: Vec<SubmoduleBasis>,
}

/// An embedded operation with its expected output, written by the proof
/// suites when a case fails so the exact instance can be re-run.
#[derive(Clone, Debug)]
pub struct Repro {
    pub op: String,
    pub args: BTreeMap<String, String>,
    pub expect: Value,
}

#[derive(Clone, Debug)]
pub struct Workspace {
    pub ring: Ring,
    pub space: FiniteSpace,
    pub sheaves: Vec<(String, SheafModule)>,
    pub pairings: Vec<(String, Pairing)>,
    pub submodules: Vec<(String, SubmoduleFamily)>,
    pub matrices: Vec<(String, ExactMatrix)>,
    pub seed: Option<u64>,
    pub repro: Option<Repro>,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn scalar_from_json(ring: Ring, v: &Value) -> Result<Scalar> {
    match v {
        Value::String(s) => Scalar::parse(ring, s),
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| parse_err(format!("scalar {n} is not a plain integer")))?;
            Ok(Scalar::from_int(ring, i))
        }
        other => Err(parse_err(format!("expected a scalar, found {other}"))),
    }
}

pub fn matrix_from_json(ring: Ring, v: &Value) -> Result<ExactMatrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| parse_err("a matrix is an array of rows"))?;
    let height = rows.len();
    let width = rows
        .first()
        .map(|r| {
            r.as_array()
                .map(|a| a.len())
                .ok_or_else(|| parse_err("a matrix row is an array of scalars"))
        })
        .transpose()?
        .unwrap_or(0);
    let mut m = ExactMatrix::zeros(ring, height, width);
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| parse_err("a matrix row is an array of scalars"))?;
        if row.len() != width {
            return Err(parse_err(format!(
                "row {i} has {} entries, row 0 has {width}",
                row.len()
            )));
        }
        for (j, cell) in row.iter().enumerate() {
            m.set(i, j, scalar_from_json(ring, cell)?);
        }
    }
    Ok(m)
}

pub fn matrix_to_json(m: &ExactMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    (0..m.cols())
                        .map(|j| Value::String(m.get(i, j).to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Matrices keyed by open index, written in numeric key order.
pub fn per_open_to_json(entries: impl Iterator<Item = (usize, Value)>) -> Value {
    let mut map = Map::new();
    for (open, v) in entries {
        map.insert(open.to_string(), v);
    }
    Value::Object(map)
}

fn open_keyed<'v>(v: &'v Value, what: &str) -> Result<Vec<(usize, &'v Value)>> {
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err(format!("{what} must be an object keyed by open index")))?;
    let mut out = Vec::new();
    for (k, val) in obj {
        let idx: usize = k
            .parse()
            .map_err(|_| parse_err(format!("{what} key {k:?} is not an open index")))?;
        out.push((idx, val));
    }
    out.sort_by_key(|&(i, _)| i);
    Ok(out)
}

fn space_from_json(v: &Value) -> Result<FiniteSpace> {
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err("space must be an object"))?;
    let points = obj
        .get("points")
        .and_then(Value::as_u64)
        .ok_or_else(|| parse_err("space.points must be a count"))? as usize;
    if points > 64 {
        return Err(parse_err("at most 64 points are supported"));
    }
    let opens = obj
        .get("opens")
        .and_then(Value::as_array)
        .ok_or_else(|| parse_err("space.opens must be an array of point lists"))?;
    let mut masks = Vec::with_capacity(opens.len());
    for o in opens {
        let pts = o
            .as_array()
            .ok_or_else(|| parse_err("each open is an array of point indices"))?;
        let mut mask = 0u64;
        for p in pts {
            let p = p
                .as_u64()
                .ok_or_else(|| parse_err("point indices are non-negative integers"))?;
            if p as usize >= points {
                return Err(parse_err(format!("point {p} outside 0..{points}")));
            }
            mask |= 1 << p;
        }
        masks.push(mask);
    }
    let violations = FiniteSpace::new_unchecked(points, masks.clone()).validate_topology();
    if !violations.is_empty() {
        let text: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(Error::Invalid(format!(
            "not a topology: {}",
            text.join("; ")
        )));
    }
    FiniteSpace::new(points, masks)
}

fn space_to_json(s: &FiniteSpace) -> Value {
    json!({
        "points": s.points(),
        "opens": s
            .opens()
            .iter()
            .map(|&mask| {
                Value::Array(
                    (0..s.points())
                        .filter(|p| mask & (1 << p) != 0)
                        .map(|p| Value::Number(p.into()))
                        .collect(),
                )
            })
            .collect::<Vec<_>>(),
    })
}

fn sheaf_from_json(space: &FiniteSpace, ring: Ring, v: &Value) -> Result<SheafModule> {
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err("a sheaf must be an object"))?;
    let mut ranks = vec![0usize; space.open_count()];
    if let Some(r) = obj.get("ranks") {
        for (idx, val) in open_keyed(r, "ranks")? {
            if idx >= space.open_count() {
                return Err(parse_err(format!("rank listed for unknown open {idx}")));
            }
            ranks[idx] =
                val.as_u64()
                    .ok_or_else(|| parse_err("ranks must be counts"))? as usize;
        }
    }
    let mut restrictions = BTreeMap::new();
    if let Some(r) = obj.get("restrictions") {
        let map = r
            .as_object()
            .ok_or_else(|| parse_err("restrictions must be an object keyed \"u>v\""))?;
        for (k, val) in map {
            let (u, v_part) = k
                .split_once('>')
                .ok_or_else(|| parse_err(format!("restriction key {k:?} is not \"u>v\"")))?;
            let u: usize = u
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad open index in key {k:?}")))?;
            let v_idx: usize = v_part
                .trim()
                .parse()
                .map_err(|_| parse_err(format!("bad open index in key {k:?}")))?;
            restrictions.insert((u, v_idx), matrix_from_json(ring, val)?);
        }
    }
    Ok(SheafModule::from_parts(
        space.clone(),
        ring,
        ranks,
        restrictions,
    ))
}

pub fn sheaf_to_json(m: &SheafModule) -> Value {
    let mut ranks = Map::new();
    for (i, r) in m.ranks().iter().enumerate() {
        ranks.insert(i.to_string(), json!(r));
    }
    let mut restrictions = Map::new();
    for ((u, v), mat) in m.restrictions() {
        restrictions.insert(format!("{u}>{v}"), matrix_to_json(mat));
    }
    json!({"ranks": Value::Object(ranks), "restrictions": Value::Object(restrictions)})
}

fn pairing_from_json(
    sheaves: &[(String, SheafModule)],
    ring: Ring,
    space: &FiniteSpace,
    v: &Value,
) -> Result<Pairing> {
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err("a pairing must be an object"))?;
    let find = |key: &str| -> Result<SheafModule> {
        let name = obj
            .get(key)
            .and_then(Value::as_str)
            .ok_or_else(|| parse_err(format!("pairing needs a sheaf name under {key:?}")))?;
        sheaves
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s.clone())
            .ok_or_else(|| Error::Invalid(format!("pairing references unknown sheaf {name:?}")))
    };
    let e = find("e")?;
    let f = find("f")?;
    let mut gram = (0..space.open_count())
        .map(|u| ExactMatrix::zeros(ring, e.rank_of(u), f.rank_of(u)))
        .collect::<Vec<_>>();
    if let Some(g) = obj.get("gram") {
        for (idx, val) in open_keyed(g, "gram")? {
            if idx >= space.open_count() {
                return Err(parse_err(format!("gram listed for unknown open {idx}")));
            }
            gram[idx] = matrix_from_json(ring, val)?;
        }
    }
    let mut symmetric = false;
    let mut skew = false;
    if let Some(flags) = obj.get("flags") {
        let arr = flags
            .as_array()
            .ok_or_else(|| parse_err("flags must be an array"))?;
        for fl in arr {
            match fl.as_str() {
                Some("symmetric") => symmetric = true,
                Some("skew") => skew = true,
                _ => return Err(parse_err(format!("unknown pairing flag {fl}"))),
            }
        }
    }
    Pairing::new(e, f, gram, symmetric, skew)
}

pub fn pairing_to_json(p: &Pairing, e_name: &str, f_name: &str) -> Value {
    let mut gram = Map::new();
    for u in 0..p.space().open_count() {
        let g = p.gram(u);
        if g.rows() * g.cols() > 0 {
            gram.insert(u.to_string(), matrix_to_json(g));
        }
    }
    let mut flags = Vec::new();
    if p.is_symmetric_flagged() {
        flags.push(Value::String("symmetric".into()));
    }
    if p.is_skew_flagged() {
        flags.push(Value::String("skew".into()));
    }
    json!({"e": e_name, "f": f_name, "gram": Value::Object(gram), "flags": flags})
}

fn family_from_json(
    sheaves: &[(String, SheafModule)],
    ring: Ring,
    v: &Value,
) -> Result<SubmoduleFamily> {
    let obj = v
        .as_object()
        .ok_or_else(|| parse_err("a submodule must be an object"))?;
    let sheaf_name = obj
        .get("sheaf")
        .and_then(Value::as_str)
        .ok_or_else(|| parse_err("a submodule names its sheaf"))?;
    let sheaf = sheaves
        .iter()
        .find(|(n, _)| n == sheaf_name)
        .map(|(_, s)| s)
        .ok_or_else(|| {
            Error::Invalid(format!("submodule references unknown sheaf {sheaf_name:?}"))
        })?;
    let mut at: Vec<SubmoduleBasis> = sheaf
        .ranks()
        .iter()
        .map(|&r| SubmoduleBasis::zero(ring, r))
        .collect();
    if let Some(c) = obj.get("columns") {
        for (idx, val) in open_keyed(c, "columns")? {
            if idx >= at.len() {
                return Err(parse_err(format!("columns listed for unknown open {idx}")));
            }
            let m = matrix_from_json(ring, val)?;
            if m.rows() != sheaf.rank_of(idx) {
                return Err(Error::Shape(format!(
                    "columns on open {idx} have {} rows, the sheaf has rank {}",
                    m.rows(),
                    sheaf.rank_of(idx)
                )));
            }
            at[idx] = SubmoduleBasis::span(&m);
        }
    }
    Ok(SubmoduleFamily {
        sheaf: sheaf_name.to_string(),
        at,
    })
}

pub fn family_to_json(f: &SubmoduleFamily) -> Value {
    let mut columns = Map::new();
    for (i, s) in f.at.iter().enumerate() {
        if s.dim() > 0 {
            columns.insert(i.to_string(), matrix_to_json(s.generators()));
        }
    }
    json!({"sheaf": f.sheaf, "columns": Value::Object(columns)})
}

pub fn parse_workspace(text: &str) -> Result<Workspace> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| parse_err(format!("invalid JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| parse_err("the workspace must be a JSON object"))?;
    for key in obj.keys() {
        if ![
            "ring",
            "space",
            "sheaves",
            "pairings",
            "submodules",
            "matrices",
            "seed",
            "repro",
        ]
        .contains(&key.as_str())
        {
            return Err(parse_err(format!("unknown workspace key {key:?}")));
        }
    }
    let ring = match obj.get("ring").and_then(Value::as_str) {
        Some("QQ") => Ring::Rational,
        Some("ZZ") => Ring::Integer,
        Some(other) => return Err(parse_err(format!("unknown ring {other:?}"))),
        None => return Err(parse_err("workspace needs \"ring\": \"QQ\" or \"ZZ\"")),
    };
    let space = space_from_json(
        obj.get("space")
            .ok_or_else(|| parse_err("workspace needs a space"))?,
    )?;

    let mut sheaves = Vec::new();
    if let Some(s) = obj.get("sheaves") {
        let map = s
            .as_object()
            .ok_or_else(|| parse_err("sheaves must be an object of named entries"))?;
        for (name, val) in map {
            sheaves.push((name.clone(), sheaf_from_json(&space, ring, val)?));
        }
    }
    let mut pairings = Vec::new();
    if let Some(p) = obj.get("pairings") {
        let map = p
            .as_object()
            .ok_or_else(|| parse_err("pairings must be an object of named entries"))?;
        for (name, val) in map {
            pairings.push((
                name.clone(),
                pairing_from_json(&sheaves, ring, &space, val)?,
            ));
        }
    }
    let mut submodules = Vec::new();
    if let Some(s) = obj.get("submodules") {
        let map = s
            .as_object()
            .ok_or_else(|| parse_err("submodules must be an object of named entries"))?;
        for (name, val) in map {
            submodules.push((name.clone(), family_from_json(&sheaves, ring, val)?));
        }
    }
    let mut matrices = Vec::new();
    if let Some(m) = obj.get("matrices") {
        let map = m
            .as_object()
            .ok_or_else(|| parse_err("matrices must be an object of named entries"))?;
        for (name, val) in map {
            matrices.push((name.clone(), matrix_from_json(ring, val)?));
        }
    }
    let seed = match obj.get("seed") {
        None => None,
        Some(v) => Some(
            v.as_u64()
                .ok_or_else(|| parse_err("seed must be a 64-bit unsigned integer"))?,
        ),
    };
    let repro = match obj.get("repro") {
        None => None,
        Some(v) => {
            let o = v
                .as_object()
                .ok_or_else(|| parse_err("repro must be an object"))?;
            let op = o
                .get("op")
                .and_then(Value::as_str)
                .ok_or_else(|| parse_err("repro needs an op name"))?
                .to_string();
            let mut args = BTreeMap::new();
            if let Some(a) = o.get("args") {
                let amap = a
                    .as_object()
                    .ok_or_else(|| parse_err("repro args must be an object"))?;
                for (k, val) in amap {
                    let s = val
                        .as_str()
                        .ok_or_else(|| parse_err("repro args are strings"))?;
                    args.insert(k.clone(), s.to_string());
                }
            }
            let expect = o
                .get("expect")
                .cloned()
                .ok_or_else(|| parse_err("repro needs an expected result"))?;
            Some(Repro { op, args, expect })
        }
    };

    let mut names = std::collections::BTreeSet::new();
    for (n, _) in &sheaves {
        if !names.insert(n.clone()) {
            return Err(Error::Invalid(format!("duplicate name {n:?}")));
        }
    }
    for (n, _) in &pairings {
        if !names.insert(n.clone()) {
            return Err(Error::Invalid(format!("duplicate name {n:?}")));
        }
    }
    for (n, _) in &submodules {
        if !names.insert(n.clone()) {
            return Err(Error::Invalid(format!("duplicate name {n:?}")));
        }
    }
    for (n, _) in &matrices {
        if !names.insert(n.clone()) {
            return Err(Error::Invalid(format!("duplicate name {n:?}")));
        }
    }

    Ok(Workspace {
        ring,
        space,
        sheaves,
        pairings,
        submodules,
        matrices,
        seed,
        repro,
    })
}

impl Workspace {
    pub fn sheaf(&self, name: &str) -> Result<&SheafModule> {
        self.sheaves
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s)
            .ok_or_else(|| Error::Invalid(format!("no sheaf named {name:?}")))
    }

    pub fn pairing(&self, name: &str) -> Result<&Pairing> {
        self.pairings
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p)
            .ok_or_else(|| Error::Invalid(format!("no pairing named {name:?}")))
    }

    pub fn family(&self, name: &str) -> Result<&SubmoduleFamily> {
        self.submodules
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, f)| f)
            .ok_or_else(|| Error::Invalid(format!("no submodule named {name:?}")))
    }

    pub fn matrix(&self, name: &str) -> Result<&ExactMatrix> {
        self.matrices
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| Error::Invalid(format!("no matrix named {name:?}")))
    }

    pub fn to_json(&self) -> Value {
        let mut root = Map::new();
        root.insert("ring".into(), json!(self.ring.name()));
        root.insert("space".into(), space_to_json(&self.space));
        if !self.sheaves.is_empty() {
            let mut m = Map::new();
            for (n, s) in &self.sheaves {
                m.insert(n.clone(), sheaf_to_json(s));
            }
            root.insert("sheaves".into(), Value::Object(m));
        }
        if !self.pairings.is_empty() {
            let mut m = Map::new();
            for (n, p) in &self.pairings {
                let e_name = self
                    .sheaves
                    .iter()
                    .find(|(_, s)| s == p.e())
                    .map(|(n, _)| n.as_str())
                    .unwrap_or("e");
                let f_name = self
                    .sheaves
                    .iter()
                    .find(|(_, s)| s == p.f())
                    .map(|(n, _)| n.as_str())
                    .unwrap_or("f");
                m.insert(n.clone(), pairing_to_json(p, e_name, f_name));
            }
            root.insert("pairings".into(), Value::Object(m));
        }
        if !self.submodules.is_empty() {
            let mut m = Map::new();
            for (n, f) in &self.submodules {
                m.insert(n.clone(), family_to_json(f));
            }
            root.insert("submodules".into(), Value::Object(m));
        }
        if !self.matrices.is_empty() {
            let mut m = Map::new();
            for (n, mat) in &self.matrices {
                m.insert(n.clone(), matrix_to_json(mat));
            }
            root.insert("matrices".into(), Value::Object(m));
        }
        if let Some(seed) = self.seed {
            root.insert("seed".into(), json!(seed));
        }
        if let Some(r) = &self.repro {
            let mut args = Map::new();
            for (k, v) in &r.args {
                args.insert(k.clone(), Value::String(v.clone()));
            }
            root.insert(
                "repro".into(),
                json!({"op": r.op, "args": Value::Object(args), "expect": r.expect}),
            );
        }
        Value::Object(root)
    }
}
