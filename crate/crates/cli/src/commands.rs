use serde_json::{json, Map, Value};

use minfill::additive::{
    is_additive, is_pseudo_additive, reconstruct, rubleva_check, AdditiveError, GeneratingTree,
};
use minfill::embed::{
    induced_lengths, kuratowski_embed, kuratowski_network, linf_distance, mst, ratio_sweep, sgr, smt_planar,
    Generator, PlanarConfig,
};
use minfill::fillings::{key_with_labels, mf, mpf, transport_along_ray, FillingReport, SweepOptions};
use minfill::lp::SignMode;
use minfill::metric::{four_point_check, shift, shift_floor, CyclicOrder, FourPointMode, PseudoMetricSpace};
use minfill::rational::{format_rational, rat, to_f64, Rational};
use minfill::tours::{
    eremin_value, exactness_report, tour_table, validate_structure, Claim, MultiTourCertificate, MULTITOUR_CAP,
};
use minfill::trees::serialize::{to_json_value, to_newick};
use minfill::trees::{TreeTopology, WeightedTree};

use crate::error::{domain, CliError};

/// Settings shared by every command.
pub struct Ctx {
    pub float: bool,
    pub opts: SweepOptions,
    pub seed: u64,
}

type Out = Result<Value, CliError>;

fn q(x: &Rational) -> Value {
    Value::String(format_rational(x))
}

fn labels_of(space: &PseudoMetricSpace, ps: impl IntoIterator<Item = usize>) -> Vec<String> {
    ps.into_iter().map(|p| space.label(p).to_string()).collect()
}

fn tree_json(space: &PseudoMetricSpace, tree: &WeightedTree) -> Value {
    to_json_value(tree, space.labels())
}

fn key_of(space: &PseudoMetricSpace, t: &TreeTopology) -> String {
    key_with_labels(&t.canonical_key(), space.labels())
}

fn float_section(ctx: &Ctx, out: &mut Value, entries: Value) {
    if ctx.float {
        out["float"] = entries;
    }
}

pub fn validate(space: &PseudoMetricSpace) -> Out {
    Ok(json!({
        "valid": true,
        "nondegenerate": space.is_nondegenerate(),
        "zero_classes": space.zero_classes().into_iter().map(|c| labels_of(space, c)).collect::<Vec<_>>(),
        "additive": is_additive(space),
        "pseudo_additive": is_pseudo_additive(space),
    }))
}

fn dual_json(space: &PseudoMetricSpace, dual: &[((usize, usize), Rational)]) -> Value {
    Value::Array(
        dual.iter()
            .filter(|(_, y)| *y != rat(0))
            .map(|((p, q_), y)| json!({ "pair": [space.label(*p), space.label(*q_)], "value": q(y) }))
            .collect(),
    )
}

fn run_mf(space: &PseudoMetricSpace, ctx: &Ctx, mode: SignMode) -> Result<FillingReport, CliError> {
    mf(space, mode, &ctx.opts).map_err(domain)
}

fn mf_json(space: &PseudoMetricSpace, ctx: &Ctx, r: &FillingReport) -> Value {
    let mut out = json!({
        "mode": r.mode,
        "weight": q(&r.weight),
        "topology": key_of(space, r.best_tree.topology()),
        "tree": tree_json(space, &r.best_tree),
        "dual": dual_json(space, &r.dual),
        "topologies_evaluated": r.topologies_evaluated,
        "additive": r.additive,
        "pseudo_additive": r.pseudo_additive,
        "stable": r.stable,
    });
    if let Some(table) = &r.table {
        out["table"] = json!(table);
    }
    float_section(ctx, &mut out, json!({ "weight": to_f64(&r.weight) }));
    out
}

pub fn mf_command(space: &PseudoMetricSpace, ctx: &Ctx, free: bool) -> Out {
    let mode = if free { SignMode::Free } else { SignMode::Nonnegative };
    let r = run_mf(space, ctx, mode)?;
    Ok(mf_json(space, ctx, &r))
}

pub fn mpf_command(space: &PseudoMetricSpace, ctx: &Ctx, t: &TreeTopology) -> Out {
    let r = mpf(space, t, SignMode::Nonnegative).map_err(domain)?;
    let free = mpf(space, t, SignMode::Free).map_err(domain)?;
    let dual: Vec<((usize, usize), Rational)> = r.lp.pairs.iter().copied().zip(r.solution.dual.iter().cloned()).collect();
    let mut out = json!({
        "topology": key_of(space, t),
        "weight": q(&r.value),
        "weight_free": q(&free.value),
        "tree": tree_json(space, &r.tree),
        "dual": dual_json(space, &dual),
    });
    float_section(ctx, &mut out, json!({ "weight": to_f64(&r.value), "weight_free": to_f64(&free.value) }));
    Ok(out)
}

/// The tree a command works on: the mpf of a given topology or the mf winner.
pub fn subject(space: &PseudoMetricSpace, ctx: &Ctx, t: Option<&TreeTopology>) -> Result<WeightedTree, CliError> {
    match t {
        Some(t) => Ok(mpf(space, t, SignMode::Nonnegative).map_err(domain)?.tree),
        None => Ok(run_mf(space, ctx, SignMode::Nonnegative)?.best_tree),
    }
}

fn order_json(space: &PseudoMetricSpace, o: &CyclicOrder) -> Vec<String> {
    labels_of(space, o.seq().iter().copied())
}

fn tour_rows(space: &PseudoMetricSpace, tree: &WeightedTree, ctx: &Ctx) -> Result<Vec<Value>, CliError> {
    let rows = tour_table(space, tree, ctx.opts.cap).map_err(domain)?;
    Ok(rows
        .iter()
        .map(|r| json!({ "order": order_json(space, &r.order), "half_perimeter": q(&r.half_perimeter), "exact": r.exact }))
        .collect())
}

pub fn tours(space: &PseudoMetricSpace, ctx: &Ctx, tree: &WeightedTree) -> Out {
    let rows = tour_rows(space, tree, ctx)?;
    let (base, _) = tree.base();
    let base_rows = tour_rows(space, &base, ctx)?;
    let exact_tour = rows.iter().find(|r| r["exact"] == json!(true)).map(|r| r["order"].clone());
    Ok(json!({
        "tree": tree_json(space, tree),
        "weight": q(&tree.total_weight()),
        "tours": rows,
        "exact_tour": exact_tour,
        "base": { "tree": tree_json(space, &base), "tours": base_rows },
    }))
}

fn certificate_json(space: &PseudoMetricSpace, c: &Option<MultiTourCertificate>) -> Value {
    match c {
        Some(c) => json!({ "k": c.k, "cycle": labels_of(space, c.cycle.iter().copied()) }),
        None => Value::Null,
    }
}

pub fn multitour(space: &PseudoMetricSpace, k: usize, tree: &WeightedTree) -> Out {
    let r = eremin_value(space, tree.topology(), k).map_err(domain)?;
    Ok(json!({
        "topology": key_of(space, tree.topology()),
        "max_k": k,
        "dual_value": q(&r.dual_value),
        "best": certificate_json(space, &r.best),
        "best_half_perimeter": r.best_half_perimeter.as_ref().map(q),
        "attained": r.attained,
        "realization": certificate_json(space, &r.realization),
        "realization_verified": r.realization_verified,
    }))
}

fn generating_json(space: &PseudoMetricSpace, g: &GeneratingTree) -> Value {
    json!({
        "tree": tree_json(space, &g.tree),
        "newick": to_newick(&g.tree, space.labels()).ok(),
        "weight": q(&g.tree.total_weight()),
        "signed": g.signed,
    })
}

pub fn additive(space: &PseudoMetricSpace) -> Out {
    let strong = four_point_check(space, FourPointMode::Strong);
    let weak = four_point_check(space, FourPointMode::Weak);
    let mut out = json!({ "additive": strong.holds, "pseudo_additive": weak.holds });
    if strong.holds {
        let g = reconstruct(space, false).map_err(domain)?;
        out["tree"] = tree_json(space, &g.tree);
        out["weight"] = q(&g.tree.total_weight());
    } else if let Some(v) = strong.violation {
        out["quadruple"] = json!(labels_of(space, v));
    }
    if weak.holds && !strong.holds {
        let g = reconstruct(space, true).map_err(domain)?;
        out["signed_tree"] = tree_json(space, &g.tree);
        out["signed_weight"] = q(&g.tree.total_weight());
    }
    Ok(out)
}

pub fn gentree(space: &PseudoMetricSpace, signed: bool) -> Out {
    match reconstruct(space, signed) {
        Ok(g) => Ok(generating_json(space, &g)),
        Err(AdditiveError::NotAdditive { quadruple }) => Err(CliError::Domain {
            kind: "NotAdditive".into(),
            message: "the space is not generated by a tree".into(),
            detail: json!({ "quadruple": quadruple.map(|v| labels_of(space, v)) }),
        }),
        Err(e) => Err(domain(e)),
    }
}

pub fn embed(space: &PseudoMetricSpace, planar: Option<&PlanarConfig>, tree: &WeightedTree) -> Out {
    let rows = kuratowski_embed(space);
    let isometric = space.pairs().all(|(i, j)| &linf_distance(&rows[i], &rows[j]) == space.d(i, j));
    let images = kuratowski_network(space, tree).map_err(domain)?;
    let lengths = induced_lengths(tree, &images);
    let vd = tree.vertex_distances();
    let k = images.len();
    let non_stretching = (0..k).all(|u| (u + 1..k).all(|v| linf_distance(&images[u], &images[v]) <= vd[u][v]));
    let (mst_weight, mst_edges) = mst(space);
    let coords = |p: &minfill::embed::LinfPoint| p.coords.iter().map(q).collect::<Vec<_>>();
    let mut out = json!({
        "isometric": isometric,
        "kuratowski": rows.iter().enumerate().map(|(i, p)| json!({ "label": space.label(i), "coords": coords(p) })).collect::<Vec<_>>(),
        "tree": tree_json(space, tree),
        "network": images.iter().enumerate().map(|(v, p)| json!({ "vertex": v, "coords": coords(p) })).collect::<Vec<_>>(),
        "induced_lengths": lengths.iter().map(q).collect::<Vec<_>>(),
        "lengths_equal_weights": lengths == tree.weights(),
        "non_stretching": non_stretching,
        "mst": {
            "weight": q(&mst_weight),
            "edges": mst_edges.iter().map(|&(i, j)| [space.label(i), space.label(j)]).collect::<Vec<_>>(),
        },
    });
    if let Some(c) = planar {
        let smt = (2..=minfill::embed::MAX_SMT_POINTS)
            .contains(&c.len())
            .then(|| smt_planar(&c.points))
            .transpose()
            .map_err(domain)?;
        out["float"] = json!({ "smt": smt });
    }
    Ok(out)
}

pub fn ratios(space: &PseudoMetricSpace, planar: Option<&PlanarConfig>, ctx: &Ctx) -> Out {
    let (tree, _) = mst(space);
    let r = sgr(space, &ctx.opts).map_err(domain)?;
    let mf_weight = &r * &tree;
    let mut out = json!({ "mf": q(&mf_weight), "mst": q(&tree), "sgr": q(&r) });
    let mut floats = json!({ "sgr": to_f64(&r) });
    if let Some(c) = planar {
        let smt = smt_planar(&c.points).map_err(domain)?;
        floats["smt"] = json!(smt.length);
        floats["ssr"] = json!(to_f64(&mf_weight) / smt.length);
    }
    float_section(ctx, &mut out, floats);
    Ok(out)
}

pub fn sweep(ctx: &Ctx, generator: Generator, count: usize, arity: usize) -> Out {
    if generator == Generator::RandomPlanar && !ctx.float {
        return Err(CliError::usage("the ssr sweep is float-only; use --mode float"));
    }
    let s = ratio_sweep(generator, count, arity, ctx.seed, &ctx.opts).map_err(domain)?;
    let mut out = json!({
        "generator": s.generator,
        "ratio": s.ratio,
        "arity": s.arity,
        "seed": ctx.seed,
        "samples": s.samples,
        "argmin": s.argmin,
        "min_exact": s.min_exact,
        "violations": s.violations,
    });
    let mut floats = json!({ "min": s.min, "bound": s.bound, "histogram": s.histogram });
    if generator == Generator::RandomPlanar {
        floats["argmin_input"] = s.argmin_input;
    } else {
        out["argmin_input"] = s.argmin_input;
    }
    if ctx.float {
        out["float"] = floats;
    }
    Ok(out)
}

pub fn rays(space: &PseudoMetricSpace, ctx: &Ctx, a: &Rational) -> Out {
    let floor = shift_floor(space);
    let shifted = shift(space, a).map_err(domain)?;
    let base = run_mf(space, ctx, SignMode::Nonnegative)?;
    let moved = run_mf(&shifted, ctx, SignMode::Nonnegative)?;
    let predicted = &base.weight + a * rat(space.n() as i64) / rat(2);
    let transported = transport_along_ray(space, &base.best_tree, a).map_err(domain)?;
    let carried = transported.total_weight();
    Ok(json!({
        "a": q(a),
        "floor": floor.as_ref().map(q),
        "mf": q(&base.weight),
        "mf_shifted": q(&moved.weight),
        "predicted": q(&predicted),
        "transported": tree_json(space, &transported),
        "transported_weight": q(&carried),
        "transported_is_filling": transported.is_filling_of(&shifted),
        "agrees": moved.weight == predicted && carried == moved.weight,
    }))
}

fn section(r: Out) -> Value {
    r.unwrap_or_else(|e| json!({ "error": e.to_json() }))
}

/// Every analysis of one space in a single object.
pub fn report(space: &PseudoMetricSpace, planar: Option<&PlanarConfig>, ctx: &Ctx) -> Out {
    let mut out = Map::new();
    out.insert("validate".into(), section(validate(space)));
    let winner = run_mf(space, ctx, SignMode::Nonnegative);
    out.insert("mf".into(), section(winner.as_ref().map(|r| mf_json(space, ctx, r)).map_err(clone_err)));
    if let Ok(r) = &winner {
        let tree = &r.best_tree;
        let t = tree.topology();
        out.insert("tours".into(), section(tours(space, ctx, tree)));
        out.insert(
            "exactness".into(),
            section(exactness_report(space, tree).map_err(domain).map(|x| {
                json!({
                    "exact_pairs": x.exact_paths_graph.iter().map(|&(p, q_)| [space.label(p), space.label(q_)]).collect::<Vec<_>>(),
                    "edges": x.edges,
                    "vertices": x.vertices,
                    "exact_paths_connected": x.exact_paths_connected(space.n()),
                })
            })),
        );
        out.insert(
            "structure".into(),
            json!({
                "mpf": validate_structure(space, tree, Claim::Mpf),
                "mf": validate_structure(space, tree, Claim::Mf),
            }),
        );
        let n = t.point_count();
        if t.is_binary() && n >= 2 && n <= MULTITOUR_CAP {
            let k = if 2 * n <= MULTITOUR_CAP { 2 } else { 1 };
            out.insert("multitour".into(), section(multitour(space, k, tree)));
        }
        out.insert("embed".into(), section(embed(space, planar, tree)));
    }
    out.insert("additive".into(), section(additive(space)));
    out.insert(
        "rubleva".into(),
        section(rubleva_check(space, &ctx.opts).map_err(domain).map(|r| {
            json!({ "mf": q(&r.mf), "half_perimeter": q(&r.half_perimeter), "equal": r.equal, "additive": r.additive, "consistent": r.consistent() })
        })),
    );
    if space.n() >= 2 {
        out.insert("ratios".into(), section(ratios(space, planar, ctx)));
    }
    Ok(Value::Object(out))
}

fn clone_err(e: &CliError) -> CliError {
    match e {
        CliError::Usage(m) => CliError::Usage(m.clone()),
        CliError::Domain { kind, message, detail } => CliError::Domain {
            kind: kind.clone(),
            message: message.clone(),
            detail: detail.clone(),
        },
    }
}
