//! Named operations over a workspace, each returning a JSON value with a
//! fixed key order so identical inputs print identical bytes. This is the
//! single dispatch surface shared by the command-line tool and by
//! reproducer files.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::io::{matrix_to_json, SubmoduleFamily, Workspace};
use crate::matrix::ExactMatrix;
use crate::pairing::{Pairing, PairingViolation};
use crate::sheaf::{covers_of, PresheafViolation};
use crate::snf::smith_normal_form;
use crate::submodule::{image_basis, kernel_basis, SubmoduleBasis};
use crate::witt::{find_partner, hyperbolic_decomposition, verify_witt, WittDecomposition};

pub const OPERATIONS: &[&str] = &[
    "smith",
    "dimension",
    "biortho",
    "codim",
    "orthogonal",
    "radical",
    "leftkernel",
    "rightkernel",
    "insertionrank",
    "dualproj",
    "dualrestrict",
    "quotientdual",
    "quotient",
    "partner",
    "witt",
    "sheafaxioms",
    "repro",
];

type Args = BTreeMap<String, String>;

fn req<'a>(args: &'a Args, key: &str) -> Result<&'a str> {
    args.get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::Usage(format!("missing required argument {key}=")))
}

fn check_args(op: &str, args: &Args, allowed: &[&str]) -> Result<()> {
    for k in args.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(Error::Usage(format!(
                "operation {op} does not take {k}= (allowed: {})",
                allowed.join(", ")
            )));
        }
    }
    Ok(())
}

fn side(args: &Args) -> Result<bool> {
    match args.get("side").map(String::as_str) {
        None | Some("left") => Ok(true),
        Some("right") => Ok(false),
        Some(other) => Err(Error::Usage(format!(
            "side must be left or right, not {other:?}"
        ))),
    }
}

fn open_arg(ws: &Workspace, args: &Args) -> Result<usize> {
    match args.get("open") {
        Some(text) => {
            let idx: usize = text
                .parse()
                .map_err(|_| Error::Usage(format!("open={text:?} is not an index")))?;
            if idx >= ws.space.open_count() {
                return Err(Error::Usage(format!(
                    "open {idx} out of range, the space has {} opens",
                    ws.space.open_count()
                )));
            }
            Ok(idx)
        }
        None => Ok(ws
            .space
            .open_index(ws.space.full_mask())
            .expect("every topology contains the full open")),
    }
}

fn per_open<F>(p: &Pairing, mut body: F) -> Result<Value>
where
    F: FnMut(usize) -> Result<Value>,
{
    let mut map = Map::new();
    for u in p.space().nonempty_opens().collect::<Vec<_>>() {
        map.insert(u.to_string(), body(u)?);
    }
    Ok(Value::Object(map))
}

fn basis_json(s: &SubmoduleBasis) -> Value {
    json!({"generators": matrix_to_json(s.generators()), "dim": s.dim()})
}

fn presheaf_class(v: &PresheafViolation) -> &'static str {
    match v {
        PresheafViolation::RankCountMismatch { .. } => "RankCountMismatch",
        PresheafViolation::EmptyOpenRank { .. } => "EmptyOpenRank",
        PresheafViolation::MissingRestriction { .. } => "MissingRestriction",
        PresheafViolation::WrongShape { .. } => "WrongShape",
        PresheafViolation::WrongRing { .. } => "WrongRing",
        PresheafViolation::StrayRestriction { .. } => "StrayRestriction",
        PresheafViolation::IdentityLaw { .. } => "IdentityLaw",
        PresheafViolation::CompositionLaw { .. } => "CompositionLaw",
    }
}

fn pairing_class(v: &PairingViolation) -> &'static str {
    match v {
        PairingViolation::GramShape { .. } => "GramShape",
        PairingViolation::GramRing { .. } => "GramRing",
        PairingViolation::Compatibility { .. } => "Compatibility",
        PairingViolation::NotSymmetric { .. } => "NotSymmetric",
        PairingViolation::NotSkew { .. } => "NotSkew",
    }
}

/// Only law-level defects leave every restriction present with its declared
/// shape, which the axiom sweep needs to run without panicking.
fn axiom_sweep_is_safe(violations: &[PresheafViolation]) -> bool {
    violations.iter().all(|v| {
        matches!(
            v,
            PresheafViolation::IdentityLaw { .. }
                | PresheafViolation::CompositionLaw { .. }
                | PresheafViolation::StrayRestriction { .. }
        )
    })
}

fn family_for<'w>(ws: &'w Workspace, args: &Args, key: &str) -> Result<&'w SubmoduleFamily> {
    ws.family(req(args, key)?)
}

/// Submodule families are stored against their own sheaf, so a family can
/// reach an op whose pairing has different ranks; report that instead of
/// letting the arithmetic panic.
fn guard_family(p: &Pairing, fam: &SubmoduleFamily, e_side: bool) -> Result<()> {
    let side_sheaf = if e_side { p.e() } else { p.f() };
    for u in p.space().nonempty_opens() {
        if fam.at[u].ambient_rank() != side_sheaf.rank_of(u) {
            return Err(Error::Invalid(format!(
                "submodule over sheaf {:?} has ambient rank {} on open {u}, the pairing side has rank {}",
                fam.sheaf,
                fam.at[u].ambient_rank(),
                side_sheaf.rank_of(u)
            )));
        }
    }
    Ok(())
}

fn kernels(p: &Pairing) -> (Vec<SubmoduleBasis>, Vec<SubmoduleBasis>) {
    let count = p.space().open_count();
    let s_e = (0..count).map(|u| p.left_kernel(u)).collect();
    let s_f = (0..count).map(|u| p.right_kernel(u)).collect();
    (s_e, s_f)
}

fn witt_open_json(d: &WittDecomposition) -> Value {
    json!({
        "planes": d
            .planes
            .iter()
            .map(|pl| {
                json!({
                    "r": matrix_to_json(&pl.r),
                    "s": matrix_to_json(&pl.s),
                    "c": pl.c.to_string(),
                })
            })
            .collect::<Vec<_>>(),
        "plane_count": d.planes.len(),
        "residual": matrix_to_json(d.residual.generators()),
        "residual_rank": d.residual.dim(),
    })
}

fn op_smith(ws: &Workspace, args: &Args) -> Result<Value> {
    check_args("smith", args, &["matrix"])?;
    let m = ws.matrix(req(args, "matrix")?)?;
    let s = smith_normal_form(m);
    let factors = s.invariant_factors();
    let factorization_holds =
        s.u.mul(m).mul(&s.v) == s.d && s.u.is_unimodular() && s.v.is_unimodular();
    let divisibility_holds = factors.windows(2).all(|w| w[1].div_exact(&w[0]).is_some());
    Ok(json!({
        "d": matrix_to_json(&s.d),
        "u": matrix_to_json(&s.u),
        "v": matrix_to_json(&s.v),
        "rank": s.rank(),
        "invariant_factors": factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "all_units": s.factors_all_units(),
        "factorization_holds": factorization_holds,
        "divisibility_holds": divisibility_holds,
    }))
}

fn op_dimension(ws: &Workspace, args: &Args) -> Result<Value> {
    check_args("dimension", args, &["matrix"])?;
    let m = ws.matrix(req(args, "matrix")?)?;
    let rank = smith_normal_form(m).rank();
    let kernel_dim = kernel_basis(m).dim();
    Ok(json!({
        "rank": rank,
        "kernel_dim": kernel_dim,
        "cols": m.cols(),
        "holds": rank + kernel_dim == m.cols(),
    }))
}

fn op_biortho(ws: &Workspace, args: &Args) -> Result<Value> {
    check_args("biortho", args, &["pairing", "sub", "side"])?;
    let p = ws.pairing(req(args, "pairing")?)?;
    let fam = family_for(ws, args, "sub")?;
    let left = side(args)?;
    guard_family(p, fam, left)?;
    per_open(p, |u| {
        let s = &fam.at[u];
        let (orth, back) = if left {
            let o = p.orthogonal_in_f(u, s);
            let b = p.orthogonal_in_e(u, &o);
            (o, b)
        } else {
            let o = p.orthogonal_in_e(u, s);
            let b = p.orthogonal_in_f(u, &o);
            (o, b)
        };
        Ok(json!({
            "orthogonal": matrix_to_json(orth.generators()),
            "biorthogonal": matrix_to_json(back.generators()),
            "equals_input": back == *s,
        }))
    })
}

fn op_codim(ws: &Workspace, args: &Args) -> Result<Value> {
    check_args("codim", args, &["pairing", "sheaf", "sub"])?;
    let p = match (args.get("pairing"), args.get("sheaf")) {
        (Some(name), None) => ws.pairing(name)?.clone(),
        (None, Some(name)) => Pairing::canonical(ws.sheaf(name)?)?,
        _ => {
            return Err(Error::Usage(
                "codim takes exactly one of pairing= or sheaf=".into(),
            ))
        }
    };
    let fam = family_for(ws, args, "sub")?;
    guard_family(&p, fam, true)?;
    per_open(&p, |u| {
        let s = &fam.at[u];
        let r = p.codim_report(u, s);
        Ok(json!({
            "dim": r.dim_input,
            "codim": s.ambient_rank() - r.dim_input,
            "orthogonal_dim": r.dim_orthogonal,
            "orthogonal_codim": r.ambient - r.dim_orthogonal,
            "holds": r.holds(),
        }))
    })
}

fn op_orthogonal(ws: &Workspace, args: &Args) -> Result<Value> {
    check_args("orthogonal", args, &["pairing", "sub", "side"])?;
    let p = ws.pairing(req(args, "pairing")?)?;
    let fam = family_for(ws, args, "sub")?;
    let left = side(args)?;
    guard_family(p, fam, left)?;
    per_open(p, |u| {
        let o = if left {
            p.orthogonal_in_f(u, &fam.at[u])
        } else {
            p.orthogonal_in_e(u, &fam.at[u])
        };
        Ok(basis_json(&o))
    })
}

fn op_radical(ws: &Workspace, args: &Args) -> Result<Value> {
    check_args("radical", args, &["pairing", "sub"])?;
    let p = ws.pairing(req(args, "pairing")?)?;
    let fam = match args.get("sub") {
        Some(name) => Some(ws.family(name)?),
        None => None,
    };
    if let Some(f) = fam {
        guard_family(p, f, true)?;
    }
    per_open(p, |u| {
        let r = match fam {
            Some(f) => p.radical_of(u, &f.at[u])?,
            None => p.radical(u)?,
        };
        Ok(json!({
            "generators": matrix_to_json(r.generators()),
            "rank": r.dim(),
        }))
    })
}

fn op_kernel(ws: &Workspace, args: &Args, op: &str) -> Result<Value> {
    check_args(op, args, &["pairing"])?;
    let p = ws.pairing(req(args, "pairing")?)?;
    per_open(p, |u| {
        let k = if op == "leftkernel" {
            p.left_kernel(u)
        } else {
            p.right_kernel(u)
        };
        Ok(basis_json(&k))
    })
}

fn op_insertionrank(ws: &Workspace, args: &Args) -> Result<Value> {
    check_args("insertionrank", args, &["pairing"])?;
    let p = ws.pairing(req(args, "pairing")?)?;
    let (s_e, s_f) = kernels(p);
    let q = p.quotient_pairing(&s_e, &s_f)?;
    per_open(p, |u| {
        let left = smith_normal_form(&p.insertion_left(u)).rank();
        let right = smith_normal_form(&p.insertion_right(u)).rank();
        let quotient = q.pairing_rank(u);
        Ok(json!({
            "left_rank": left,
            "right_rank": right,
            "quotient_rank": quotient,
            "equal": left == right && right == quotient,
        }))
    })
}

fn op_dualproj(ws: &Workspace, args: &Args) -> Result<Value> {
    check_args("dualproj", args, &["pairing", "s1", "s2"])?;
    let p = ws.pairing(req(args, "pairing")?)?;
    let f1 = family_for(ws, args, "s1")?;
    let f2 = family_for(ws, args, "s2")?;
    guard_family(p, f1, true)?;
    guard_family(p, f2, true)?;
    per_open(p, |u| {
        let dp = p.dual_projections(u, &f1.at[u], &f2.at[u])?;
        let idem = [
            &dp.source_first,
            &dp.source_second,
            &dp.dual_first,
            &dp.dual_second,
        ]
        .iter()
        .all(|m| m.mul(m) == **m);
        let id_e = ExactMatrix::identity(p.ring(), dp.source_first.rows());
        let id_f = ExactMatrix::identity(p.ring(), dp.dual_first.rows());
        let sum_identity = dp.source_first.add(&dp.source_second) == id_e
            && dp.dual_first.add(&dp.dual_second) == id_f;
        let images_match = image_basis(&dp.source_first) == f1.at[u]
            && image_basis(&dp.source_second) == f2.at[u]
            && image_basis(&dp.dual_first) == p.orthogonal_in_f(u, &f1.at[u])
            && image_basis(&dp.dual_second) == p.orthogonal_in_f(u, &f2.at[u]);
        Ok(json!({
            "source_first": matrix_to_json(&dp.source_first),
            "source_second": matrix_to_json(&dp.source_second),
            "dual_first": matrix_to_json(&dp.dual_first),
            "dual_second": matrix_to_json(&dp.dual_second),
            "idempotent": idem,
            "sum_identity": sum_identity,
            "images_match": images_match,
        }))
    })
}

fn op_dualrestrict(ws: &Workspace, args: &Args) -> Result<Value> {
    check_args("dualrestrict", args, &["pairing", "sub"])?;
    let p = ws.pairing(req(args, "pairing")?)?;
    let fam = family_for(ws, args, "sub")?;
    guard_family(p, fam, true)?;
    per_open(p, |u| {
        let s = &fam.at[u];
        let dr = p.dual_restriction(u, s)?;
        let kernel = kernel_basis(&dr.restricted_insertion);
        let orth = p.orthogonal_in_f(u, s);
        let rank_identity_holds = s.dim() == p.f().rank_of(u) - orth.dim();
        Ok(json!({
            "to_summand": matrix_to_json(&dr.to_summand),
            "restricted_insertion": matrix_to_json(&dr.restricted_insertion),
            "surjective": dr.surjective,
            "kernel": matrix_to_json(kernel.generators()),
            "kernel_is_orthogonal": kernel == orth,
            "rank_identity_holds": rank_identity_holds,
        }))
    })
}

fn op_quotientdual(ws: &Workspace, args: &Args) -> Result<Value> {
    check_args("quotientdual", args, &["pairing", "sub"])?;
    let p = ws.pairing(req(args, "pairing")?)?;
    let fam = family_for(ws, args, "sub")?;
    guard_family(p, fam, true)?;
    per_open(p, |u| {
        let emb = p.quotient_embedding_dual(u, &fam.at[u])?;
        let injective = kernel_basis(&emb).dim() == 0;
        let image_matches = image_basis(&emb) == p.orthogonal_in_f(u, &fam.at[u]);
        Ok(json!({
            "embedding": matrix_to_json(&emb),
            "injective": injective,
            "image_matches_orthogonal": image_matches,
        }))
    })
}

fn op_quotient(ws: &Workspace, args: &Args) -> Result<Value> {
    check_args("quotient", args, &["pairing", "e_sub", "f_sub"])?;
    let p = ws.pairing(req(args, "pairing")?)?;
    let q = match (args.get("e_sub"), args.get("f_sub")) {
        (None, None) => {
            let (s_e, s_f) = kernels(p);
            p.quotient_pairing(&s_e, &s_f)?
        }
        (Some(a), Some(b)) => {
            let fa = ws.family(a)?;
            let fb = ws.family(b)?;
            p.quotient_pairing(&fa.at, &fb.at)?
        }
        _ => {
            return Err(Error::Usage(
                "quotient takes e_sub= and f_sub= together or neither".into(),
            ))
        }
    };
    per_open(p, |u| {
        Ok(json!({
            "gram": matrix_to_json(q.gram(u)),
            "rank": q.pairing_rank(u),
            "nondegenerate": q.is_nondegenerate(u),
        }))
    })
}

fn op_partner(ws: &Workspace, args: &Args) -> Result<Value> {
    check_args("partner", args, &["pairing", "basis", "open"])?;
    let p = ws.pairing(req(args, "pairing")?)?;
    let basis = ws.matrix(req(args, "basis")?)?;
    let open = open_arg(ws, args)?;
    let gram = p.gram(open);
    let (s, c) = find_partner(gram, basis)?;
    let value = basis.col(0).transpose().mul(gram).mul(&s);
    let value = value.get(0, 0);
    Ok(json!({
        "s": matrix_to_json(&s),
        "c": c.to_string(),
        "pairing_value": value.to_string(),
        "nonzero": !value.is_zero(),
    }))
}

fn op_witt(ws: &Workspace, args: &Args) -> Result<Value> {
    check_args("witt", args, &["pairing", "iso"])?;
    let p = ws.pairing(req(args, "pairing")?)?;
    let fam = family_for(ws, args, "iso")?;
    guard_family(p, fam, true)?;
    let w = hyperbolic_decomposition(p, &fam.at)?;
    let check = verify_witt(p, &fam.at, &w);
    let nonempty: Vec<usize> = p.space().nonempty_opens().collect();
    let mut out = if nonempty.len() == 1 {
        let flat = witt_open_json(&w.per_open[nonempty[0]]);
        flat.as_object().cloned().expect("witt json is an object")
    } else {
        let mut opens = Map::new();
        for u in nonempty {
            opens.insert(u.to_string(), witt_open_json(&w.per_open[u]));
        }
        let mut m = Map::new();
        m.insert("opens".into(), Value::Object(opens));
        m
    };
    out.insert("verified".into(), json!(check.holds()));
    out.insert("violations".into(), json!(check.violations));
    Ok(Value::Object(out))
}

fn op_sheafaxioms(ws: &Workspace, args: &Args) -> Result<Value> {
    check_args("sheafaxioms", args, &["sheaf"])?;
    let s = ws.sheaf(req(args, "sheaf")?)?;
    let violations = s.validate_presheaf();
    let mut classes: Vec<&str> = Vec::new();
    for v in &violations {
        let c = presheaf_class(v);
        if !classes.contains(&c) {
            classes.push(c);
        }
    }
    let sweep = axiom_sweep_is_safe(&violations);
    let mut locality_ok = true;
    let mut gluing_ok = true;
    let mut opens = Map::new();
    if sweep {
        for u in 0..ws.space.open_count() {
            let mut checked = 0usize;
            let mut all_hold = true;
            for cover in covers_of(&ws.space, u) {
                let report = s.check_sheaf_axioms(u, &cover)?;
                checked += 1;
                locality_ok &= report.locality_holds();
                gluing_ok &= report.gluing_holds();
                all_hold &= report.holds();
            }
            opens.insert(
                u.to_string(),
                json!({"covers_checked": checked, "holds": all_hold}),
            );
        }
    }
    Ok(json!({
        "presheaf_ok": violations.is_empty(),
        "violation_classes": classes,
        "axioms_checked": sweep,
        "locality_ok": locality_ok,
        "gluing_ok": gluing_ok,
        "opens": Value::Object(opens),
    }))
}

/// Expected values embedded in reproducers match structurally: every key an
/// expected object lists must match the actual output, extra actual keys
/// are ignored, arrays and leaves must be equal.
pub fn value_matches(expect: &Value, actual: &Value) -> bool {
    match (expect, actual) {
        (Value::Object(e), Value::Object(a)) => e
            .iter()
            .all(|(k, ev)| a.get(k).is_some_and(|av| value_matches(ev, av))),
        (Value::Array(e), Value::Array(a)) => {
            e.len() == a.len() && e.iter().zip(a).all(|(ev, av)| value_matches(ev, av))
        }
        _ => expect == actual,
    }
}

fn op_repro(ws: &Workspace) -> Result<Value> {
    let r = ws
        .repro
        .as_ref()
        .ok_or_else(|| Error::Usage("this workspace embeds no reproducer".into()))?;
    let actual = run_op(ws, &r.op, &r.args)?;
    Ok(json!({
        "op": r.op,
        "matches": value_matches(&r.expect, &actual),
        "expect": r.expect,
        "actual": actual,
    }))
}

pub fn run_op(ws: &Workspace, op: &str, args: &Args) -> Result<Value> {
    match op {
        "smith" => op_smith(ws, args),
        "dimension" => op_dimension(ws, args),
        "biortho" => op_biortho(ws, args),
        "codim" => op_codim(ws, args),
        "orthogonal" => op_orthogonal(ws, args),
        "radical" => op_radical(ws, args),
        "leftkernel" | "rightkernel" => op_kernel(ws, args, op),
        "insertionrank" => op_insertionrank(ws, args),
        "dualproj" => op_dualproj(ws, args),
        "dualrestrict" => op_dualrestrict(ws, args),
        "quotientdual" => op_quotientdual(ws, args),
        "quotient" => op_quotient(ws, args),
        "partner" => op_partner(ws, args),
        "witt" => op_witt(ws, args),
        "sheafaxioms" => op_sheafaxioms(ws, args),
        "repro" => op_repro(ws),
        other => Err(Error::Usage(format!(
            "unknown operation {other:?} (available: {})",
            OPERATIONS.join(", ")
        ))),
    }
}

/// Full structural validation of everything in a workspace: presheaf laws,
/// both sheaf axioms against every cover, and pairing compatibility.
pub fn validate_report(ws: &Workspace) -> Value {
    let mut violations: Vec<Value> = Vec::new();
    let mut push = |object: String, code: &str, detail: String| {
        violations.push(json!({"object": object, "code": code, "detail": detail}));
    };
    for (name, s) in &ws.sheaves {
        let vs = s.validate_presheaf();
        for v in &vs {
            push(format!("sheaf {name}"), presheaf_class(v), v.to_string());
        }
        if axiom_sweep_is_safe(&vs) {
            for u in 0..ws.space.open_count() {
                for cover in covers_of(&ws.space, u) {
                    let report = s
                        .check_sheaf_axioms(u, &cover)
                        .expect("enumerated covers are valid");
                    if !report.locality_holds() {
                        push(
                            format!("sheaf {name}"),
                            "Locality",
                            format!("nonzero section on open {u} dies on cover {cover:?}"),
                        );
                    }
                    if !report.gluing_holds() {
                        push(
                            format!("sheaf {name}"),
                            "Gluing",
                            format!(
                                "compatible family on cover {cover:?} of open {u} glues no section"
                            ),
                        );
                    }
                }
            }
        }
    }
    for (name, p) in &ws.pairings {
        for v in p.validate_pairing() {
            push(format!("pairing {name}"), pairing_class(&v), v.to_string());
        }
    }
    let valid = violations.is_empty();
    json!({"valid": valid, "violations": violations})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse_workspace;

    fn symplectic_ws() -> Workspace {
        parse_workspace(
            r#"{
            "ring": "QQ",
            "space": {"points": 1, "opens": [[], [0]]},
            "sheaves": {"E": {"ranks": {"1": 4}}},
            "pairings": {"P": {"e": "E", "f": "E", "gram": {"1": [
                ["0","1","0","0"],["-1","0","0","0"],["0","0","0","1"],["0","0","-1","0"]
            ]}, "flags": ["skew"]}},
            "submodules": {"F": {"sheaf": "E", "columns": {"1": [["1","0"],["0","0"],["0","1"],["0","0"]]}}},
            "matrices": {"B": [["1","0","0","0"],["0","1","0","0"],["0","0","1","0"],["0","0","0","1"]]}
        }"#,
        )
        .unwrap()
    }

    fn args(pairs: &[(&str, &str)]) -> Args {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn witt_op_flattens_single_open_spaces() {
        let ws = symplectic_ws();
        let out = run_op(&ws, "witt", &args(&[("pairing", "P"), ("iso", "F")])).unwrap();
        assert_eq!(out["plane_count"], json!(2));
        assert_eq!(out["residual_rank"], json!(0));
        assert_eq!(out["verified"], json!(true));
    }

    #[test]
    fn partner_on_the_standard_form() {
        let ws = symplectic_ws();
        let out = run_op(&ws, "partner", &args(&[("pairing", "P"), ("basis", "B")])).unwrap();
        assert_eq!(out["c"], json!("1"));
        assert_eq!(out["pairing_value"], json!("1"));
        // Cofactor partner of e1 under the standard form.
        assert_eq!(out["s"][1][0], json!("1"));
    }

    #[test]
    fn radical_of_the_full_module_is_zero_here() {
        let ws = symplectic_ws();
        let out = run_op(&ws, "radical", &args(&[("pairing", "P")])).unwrap();
        assert_eq!(out["1"]["rank"], json!(0));
    }

    #[test]
    fn unknown_ops_and_args_are_usage_errors() {
        let ws = symplectic_ws();
        assert!(matches!(
            run_op(&ws, "frobnicate", &args(&[])),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            run_op(
                &ws,
                "witt",
                &args(&[("pairing", "P"), ("iso", "F"), ("x", "1")])
            ),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            run_op(&ws, "repro", &args(&[])),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn subset_matching_ignores_extra_actual_keys() {
        let expect = json!({"verified": true, "plane_count": 2});
        let actual = json!({"verified": true, "plane_count": 2, "residual_rank": 0});
        assert!(value_matches(&expect, &actual));
        assert!(!value_matches(&json!({"verified": false}), &actual));
        assert!(!value_matches(&json!([1, 2]), &json!([1, 2, 3])));
    }

    #[test]
    fn repro_runs_the_embedded_op() {
        let mut ws = symplectic_ws();
        ws.repro = Some(crate::io::Repro {
            op: "witt".into(),
            args: args(&[("pairing", "P"), ("iso", "F")]),
            expect: json!({"verified": true, "plane_count": 2}),
        });
        let out = run_op(&ws, "repro", &Args::new()).unwrap();
        assert_eq!(out["matches"], json!(true));
        ws.repro.as_mut().unwrap().expect = json!({"plane_count": 3});
        let out = run_op(&ws, "repro", &Args::new()).unwrap();
        assert_eq!(out["matches"], json!(false));
    }

    #[test]
    fn validate_report_separates_presheaves_from_sheaves() {
        // A non-identity restriction along a chain is still a sheaf: the
        // full open here admits no cover by proper sub-opens.
        let text = r#"{
            "ring": "QQ",
            "space": {"points": 2, "opens": [[], [1], [0, 1]]},
            "sheaves": {"E": {
                "ranks": {"1": 1, "2": 1},
                "restrictions": {"2>1": [["2"]]}
            }}
        }"#;
        let ws = parse_workspace(text).unwrap();
        let report = validate_report(&ws);
        assert_eq!(report["valid"], json!(true));

        // The naive constant presheaf on two disjoint points: the family
        // (a, b) with a != b is compatible (the overlap is empty) but no
        // global section restricts to it.
        let text = r#"{
            "ring": "QQ",
            "space": {"points": 2, "opens": [[], [0], [1], [0, 1]]},
            "sheaves": {"E": {
                "ranks": {"1": 1, "2": 1, "3": 1},
                "restrictions": {"3>1": [["1"]], "3>2": [["1"]]}
            }}
        }"#;
        let ws = parse_workspace(text).unwrap();
        let report = validate_report(&ws);
        assert_eq!(report["valid"], json!(false));
        let codes: Vec<&str> = report["violations"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| v["code"].as_str().unwrap())
            .collect();
        assert!(codes.contains(&"Gluing"));
        assert!(!codes.contains(&"Locality"));
    }

    #[test]
    fn codim_accepts_sheaf_or_pairing_but_not_both() {
        let ws = symplectic_ws();
        let by_sheaf = run_op(&ws, "codim", &args(&[("sheaf", "E"), ("sub", "F")])).unwrap();
        assert_eq!(by_sheaf["1"]["dim"], json!(2));
        assert_eq!(by_sheaf["1"]["orthogonal_dim"], json!(2));
        assert_eq!(by_sheaf["1"]["holds"], json!(true));
        assert!(matches!(
            run_op(
                &ws,
                "codim",
                &args(&[("sheaf", "E"), ("pairing", "P"), ("sub", "F")])
            ),
            Err(Error::Usage(_))
        ));
    }
}
