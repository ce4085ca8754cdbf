//! `survival`: command-line front end for survival-core.

mod grid;
mod out;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use survival_core::covering::{
    antipodal_witness, cover_check, ll_z_eight_cover, min_cover, sprawl_estimate, spread_witness,
    survival_probe, CoverCheck, CoverInstance, CoverResult, CoverStatus, Evidence, SprawlMode,
    SpreadPool,
};
use survival_core::voronoi::{
    cell_degree_profile, check_growth_equivalence, competition_run, growth_process, voronoi_cells,
    SiteSet, VoronoiAssignment,
};
use survival_core::{Distance, Error, GraphSpec, Limits, Vertex};

use out::{Out, OutMode};

#[derive(Parser, Debug)]
#[command(
    name = "survival",
    version,
    about = "Voronoi cells, competition and sphere covers on Cayley graphs"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Common {
    /// Graph: z:<d>:std, z:2:diag, z:<d>:custom=..., ll-z, ll-z2, free23, tree:<k>, ladder
    #[arg(long, global = true, default_value = "z:2:std")]
    graph: String,
    #[arg(long, global = true, value_enum, default_value_t = OutMode::Json)]
    out: OutMode,
    /// Worker threads, 0 for one per core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Largest BFS table allowed.
    #[arg(long, global = true, default_value_t = Limits::default().max_vertices)]
    cap_vertices: usize,
    /// Branch-and-bound node budget per cover search.
    #[arg(long, global = true, default_value_t = Limits::default().max_nodes)]
    cap_nodes: u64,
    /// Add wall_ms to records. Output is then no longer reproducible.
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Voronoi cells of a site set inside B(origin, R).
    Voronoi(VoronoiArgs),
    /// Two-species competition at speeds m and 1.
    Compete(CompeteArgs),
    /// Sphere covers with separated centers.
    Cover(CoverArgs),
    /// Antipodal pairs, spread sets and sprawl.
    Witness(WitnessArgs),
}

#[derive(Args, Debug)]
struct VoronoiArgs {
    /// Site literal; repeat for each site.
    #[arg(long = "site", required = true, allow_hyphen_values = true)]
    sites: Vec<String>,
    /// Window radius.
    #[arg(short = 'R', long = "window")]
    window: u32,
    #[arg(long, value_enum, default_value_t = Engine::Metric)]
    mode: Engine,
    /// Run both engines and report the first difference; exit 1 if any.
    #[arg(long)]
    check_equiv: bool,
    /// Within-cell degree statistics.
    #[arg(long)]
    profile: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Engine {
    Metric,
    Growth,
}

#[derive(Args, Debug)]
struct CompeteArgs {
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, allow_hyphen_values = true)]
    y: String,
    /// Speed of X; 1 gives the simultaneous process.
    #[arg(short = 'm', default_value_t = 2)]
    m: u32,
    #[arg(short = 'R', long = "window")]
    window: u32,
    #[arg(long, default_value_t = 100_000)]
    max_steps: u32,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("action").required(true).args(["verify", "search", "probe", "eight"]))]
struct CoverArgs {
    /// Check the centers given with --center.
    #[arg(long)]
    verify: bool,
    /// Exact minimum cover.
    #[arg(long)]
    search: bool,
    /// Exact minimum cover for each radius in -r.
    #[arg(long)]
    probe: bool,
    /// The eight LL(Z) centers.
    #[arg(long)]
    eight: bool,
    /// Sphere radius: N, A:B or a comma list (probe only for lists).
    #[arg(short = 'r')]
    r: String,
    /// Separation: centers pairwise and from the origin at distance >= d.
    /// A strict "> d" requirement is -d d+1.
    #[arg(short = 'd', long = "sep", default_value_t = 1)]
    sep: u32,
    /// Ball radius, default r-1.
    #[arg(long)]
    budget: Option<u32>,
    #[arg(long)]
    max_balls: Option<usize>,
    /// Center literal for --verify; repeat for each center.
    #[arg(long = "center", allow_hyphen_values = true)]
    centers: Vec<String>,
    /// Eighth LL(Z) center lighting -3d-1 through 4d instead of -3d-1 through -4d.
    #[arg(long)]
    uncorrected: bool,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("action").required(true).args(["antipodal", "spread", "sprawl"]))]
struct WitnessArgs {
    #[arg(long)]
    antipodal: bool,
    #[arg(long)]
    spread: bool,
    #[arg(long)]
    sprawl: bool,
    #[arg(short = 'r')]
    r: u32,
    #[arg(short = 'n', default_value_t = 3)]
    n: usize,
    #[arg(long)]
    min_pair: Option<u32>,
    #[arg(long, value_enum, default_value_t = Pool::Auto)]
    pool: Pool,
    /// Enumerate every pair instead of sampling.
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Pool {
    Auto,
    Sphere,
    Geodesic,
}

/// Process exit codes.
mod code {
    pub const OK: u8 = 0;
    pub const CHECK_FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const CAPACITY: u8 = 3;
    pub const BUDGET: u8 = 4;
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.common.threads > 0 {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.common.threads)
            .build_global();
    }
    match run(&cli) {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Capacity { .. } => code::CAPACITY,
                _ => code::USAGE,
            })
        }
    }
}

struct Ctx {
    spec: GraphSpec,
    limits: Limits,
    out: Out,
    timing: bool,
}

impl Ctx {
    fn caps(&self) -> Value {
        json!({"vertices": self.limits.max_vertices, "nodes": self.limits.max_nodes})
    }

    fn vertex(&self, s: &str) -> Result<Vertex, Error> {
        self.spec.parse_vertex(s)
    }
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let spec: GraphSpec = cli.common.graph.parse()?;
    let mut ctx = Ctx {
        spec,
        limits: Limits {
            max_vertices: cli.common.cap_vertices,
            max_nodes: cli.common.cap_nodes,
        },
        out: Out::new(cli.common.out),
        timing: cli.common.timing,
    };
    match &cli.cmd {
        Cmd::Voronoi(a) => cmd_voronoi(&mut ctx, a),
        Cmd::Compete(a) => cmd_compete(&mut ctx, a),
        Cmd::Cover(a) => cmd_cover(&mut ctx, a),
        Cmd::Witness(a) => cmd_witness(&mut ctx, a),
    }
}

fn strs(vs: &[Vertex]) -> Vec<String> {
    vs.iter().map(|v| v.to_string()).collect()
}

fn cmd_voronoi(ctx: &mut Ctx, a: &VoronoiArgs) -> Result<u8, Error> {
    let sites: Vec<Vertex> = a
        .sites
        .iter()
        .map(|s| ctx.vertex(s))
        .collect::<Result<_, _>>()?;
    let set = SiteSet::new(ctx.spec.clone(), sites.clone())?;
    let started = Instant::now();
    let (assign, equiv) = if a.check_equiv {
        let rep = check_growth_equivalence(&set, a.window, &ctx.limits)?;
        let diff = rep.first_difference.as_ref().map(|d| {
            json!({
                "vertex": d.vertex.to_string(),
                "metric": {"dist": d.metric.dist, "nearest": d.metric.nearest},
                "growth": {"dist": d.growth.dist, "nearest": d.growth.nearest},
            })
        });
        (rep.metric, Some((rep.identical, diff)))
    } else {
        let assign = match a.mode {
            Engine::Metric => voronoi_cells(&set, a.window, &ctx.limits)?,
            Engine::Growth => growth_process(&set, a.window, &ctx.limits)?,
        };
        (assign, None)
    };

    if ctx.out.mode() == OutMode::Grid {
        match grid::voronoi(&assign) {
            Some(g) => ctx.out.raw(&g),
            None => ctx.out.grid_fallback(),
        }
    }
    if ctx.out.mode() != OutMode::Grid {
        for (v, origin_dist, e) in assign.iter() {
            ctx.out.record(
                json!({"v": 1, "kind": "cell", "vertex": v.to_string(), "origin_dist": origin_dist,
                       "dist": e.dist, "nearest": e.nearest}),
                || format!("{v}\td={}\tcells={:?}", e.dist, e.nearest),
            );
        }
    }
    let mut summary = json!({
        "v": 1,
        "kind": "voronoi_summary",
        "graph": ctx.spec.to_string(),
        "window": a.window,
        "engine": if a.check_equiv { "both" } else { match a.mode { Engine::Metric => "metric", Engine::Growth => "growth" } },
        "sites": strs(&sites),
        "cell_sizes": (0..sites.len()).map(|i| assign.cell_size(i)).collect::<Vec<_>>(),
        "ties": assign.tie_count(),
        "touches_boundary": (0..sites.len()).map(|i| assign.touches_boundary(i)).collect::<Vec<_>>(),
        "caps": ctx.caps(),
    });
    if ctx.timing {
        summary["wall_ms"] = json!(started.elapsed().as_millis() as u64);
    }
    let text = summary_text(&summary);
    ctx.out.record(summary, || text);

    if a.profile {
        profile_records(ctx, &assign, &sites);
    }
    if let Some((identical, diff)) = equiv {
        let text = format!("equivalent: {identical}");
        ctx.out.record(
            json!({"v": 1, "kind": "equivalence", "identical": identical, "first_difference": diff}),
            || text,
        );
        if !identical {
            return Ok(code::CHECK_FAILED);
        }
    }
    Ok(code::OK)
}

fn profile_records(ctx: &mut Ctx, assign: &VoronoiAssignment, sites: &[Vertex]) {
    for (i, site) in sites.iter().enumerate() {
        let p = cell_degree_profile(assign, i);
        let hist: serde_json::Map<String, Value> = p
            .histogram
            .iter()
            .map(|(d, c)| (d.to_string(), json!(c)))
            .collect();
        let text = format!(
            "cell {i} ({site}): size {}, degree-one {:?}, histogram {:?}",
            p.cell_size,
            strs(&p.degree_one),
            p.histogram
        );
        ctx.out.record(
            json!({"v": 1, "kind": "profile", "cell": i, "site": site.to_string(), "cell_size": p.cell_size,
                   "histogram": hist, "degree_one": strs(&p.degree_one), "boundary_excluded": p.boundary_excluded}),
            || text,
        );
    }
}

fn summary_text(v: &Value) -> String {
    let obj = v.as_object().expect("record is an object");
    obj.iter()
        .filter(|(k, _)| k.as_str() != "v")
        .map(|(k, v)| format!("{k}: {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

fn cmd_compete(ctx: &mut Ctx, a: &CompeteArgs) -> Result<u8, Error> {
    let x0 = ctx.vertex(&a.x)?;
    let y0 = ctx.vertex(&a.y)?;
    let started = Instant::now();
    let st = competition_run(&ctx.spec, &x0, &y0, a.m, a.window, a.max_steps, &ctx.limits)?;
    if ctx.out.mode() == OutMode::Grid {
        match grid::competition(&ctx.spec, &st, &ctx.limits) {
            Some(g) => ctx.out.raw(&g),
            None => ctx.out.grid_fallback(),
        }
    }
    if ctx.out.mode() != OutMode::Grid {
        for s in &st.history {
            ctx.out.record(
                json!({"v": 1, "kind": "step", "step": s.step, "x_size": s.x_size, "y_size": s.y_size,
                       "x_added": s.x_added, "y_added": s.y_added}),
                || format!("step {}\t|X|={}\t|Y|={}", s.step, s.x_size, s.y_size),
            );
        }
    }
    let mut rec = json!({
        "v": 1,
        "kind": "competition",
        "graph": ctx.spec.to_string(),
        "x0": x0.to_string(),
        "y0": y0.to_string(),
        "m": a.m,
        "window": a.window,
        "steps": st.step,
        "status": st.status.as_str(),
        "x_size": st.x.len(),
        "y_size": st.y.len(),
        "x_touches_boundary": st.x_touches_boundary,
        "y_touches_boundary": st.y_touches_boundary,
        "caps": ctx.caps(),
    });
    if ctx.timing {
        rec["wall_ms"] = json!(started.elapsed().as_millis() as u64);
    }
    let text = summary_text(&rec);
    ctx.out.record(rec, || text);
    Ok(code::OK)
}

/// `N`, `A:B` (inclusive) or `a,b,c`.
fn parse_radii(s: &str) -> Result<Vec<u32>, Error> {
    let bad = || Error::Invalid(format!("bad radius list {s:?}"));
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
    if let Some((a, b)) = s.split_once(':') {
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(bad());
        }
        Ok((a..=b).collect())
    } else {
        s.split(',').map(num).collect()
    }
}

fn single_radius(s: &str) -> Result<u32, Error> {
    match parse_radii(s)?.as_slice() {
        [r] => Ok(*r),
        _ => Err(Error::Invalid("this action takes a single radius".into())),
    }
}

fn instance(ctx: &Ctx, a: &CoverArgs, r: u32) -> Result<CoverInstance, Error> {
    let mut inst = CoverInstance::new(ctx.spec.clone(), r, a.sep)?;
    if let Some(b) = a.budget {
        inst = inst.with_radius_budget(b)?;
    }
    if let Some(k) = a.max_balls {
        inst = inst.with_max_balls(k);
    }
    Ok(inst)
}

fn check_json(check: &CoverCheck) -> Value {
    match check {
        CoverCheck::Covered => json!({"covered": true}),
        CoverCheck::Uncovered(u) => {
            json!({"covered": false, "failure": "uncovered", "witness": u.to_string()})
        }
        CoverCheck::TooManyBalls { count, max } => {
            json!({"covered": false, "failure": "too_many_balls", "count": count, "max": max})
        }
        CoverCheck::TooCloseToOrigin { center, dist } => {
            json!({"covered": false, "failure": "too_close_to_origin", "center": center.to_string(), "dist": dist})
        }
        CoverCheck::TooClose { a, b, dist } => {
            json!({"covered": false, "failure": "too_close", "a": a.to_string(), "b": b.to_string(), "dist": dist})
        }
    }
}

fn result_json(ctx: &Ctx, inst: &CoverInstance, res: &CoverResult) -> Value {
    let mut rec = json!({
        "v": 1,
        "kind": "cover_result",
        "graph": ctx.spec.to_string(),
        "r": inst.r(),
        "sep": inst.sep(),
        "budget": inst.radius_budget(),
        "max_balls": inst.max_balls(),
        "status": res.status.as_str(),
        "min_size": res.min_size,
    });
    match &res.status {
        CoverStatus::Cover(c) => rec["centers"] = json!(strs(c)),
        CoverStatus::BudgetExceeded { best_known } => {
            rec["best_known"] = json!(best_known.as_deref().map(strs));
        }
        CoverStatus::NoCover => {}
    }
    rec["nodes_explored"] = json!(res.nodes_explored);
    rec["candidates"] = json!(res.candidate_count);
    rec["sphere_size"] = json!(res.sphere_size);
    rec["caps"] = ctx.caps();
    if ctx.timing {
        rec["wall_ms"] = json!(res.wall_ms as u64);
    }
    rec
}

fn cmd_cover(ctx: &mut Ctx, a: &CoverArgs) -> Result<u8, Error> {
    if ctx.out.mode() == OutMode::Grid {
        ctx.out.grid_fallback();
    }
    if a.verify {
        let r = single_radius(&a.r)?;
        let inst = instance(ctx, a, r)?;
        if a.centers.is_empty() {
            return Err(Error::Invalid(
                "--verify needs at least one --center".into(),
            ));
        }
        let centers: Vec<Vertex> = a
            .centers
            .iter()
            .map(|s| ctx.vertex(s))
            .collect::<Result<_, _>>()?;
        let check = cover_check(&inst, &centers, &ctx.limits)?;
        let mut rec = json!({"v": 1, "kind": "cover_check", "graph": ctx.spec.to_string(), "r": r,
                             "sep": inst.sep(), "budget": inst.radius_budget(), "centers": strs(&centers)});
        merge(&mut rec, check_json(&check));
        rec["caps"] = ctx.caps();
        let text = summary_text(&rec);
        ctx.out.record(rec, || text);
        return Ok(if check.is_covered() {
            code::OK
        } else {
            code::CHECK_FAILED
        });
    }
    if a.search {
        let r = single_radius(&a.r)?;
        let inst = instance(ctx, a, r)?;
        let res = min_cover(&inst, &ctx.limits)?;
        let rec = result_json(ctx, &inst, &res);
        let text = summary_text(&rec);
        ctx.out.record(rec, || text);
        return Ok(match res.status {
            CoverStatus::BudgetExceeded { .. } => code::BUDGET,
            _ => code::OK,
        });
    }
    if a.probe {
        if a.budget.is_some() || a.max_balls.is_some() {
            return Err(Error::Invalid(
                "--probe uses the default budget and no ball limit".into(),
            ));
        }
        let radii = parse_radii(&a.r)?;
        let rep = survival_probe(&ctx.spec, a.sep, &radii, &ctx.limits)?;
        let mut exceeded = false;
        for row in &rep.rows {
            let inst = CoverInstance::new(ctx.spec.clone(), row.r, a.sep)?;
            exceeded |= matches!(row.result.status, CoverStatus::BudgetExceeded { .. });
            let mut rec = result_json(ctx, &inst, &row.result);
            rec["kind"] = json!("probe_row");
            let text = format!(
                "r={}\tk={:?}\t{}",
                row.r,
                row.result.min_size,
                row.result.status.as_str()
            );
            ctx.out.record(rec, || text);
        }
        let Evidence { lower, upper } = rep.evidence;
        let text = format!("{}: lower {lower:?}, upper {upper:?}", Evidence::LABEL);
        ctx.out.record(
            json!({"v": 1, "kind": "evidence", "label": Evidence::LABEL, "graph": ctx.spec.to_string(),
                   "sep": a.sep, "radii": radii, "lower": lower, "upper": upper}),
            || text,
        );
        return Ok(if exceeded { code::BUDGET } else { code::OK });
    }
    // --eight
    if ctx.spec != GraphSpec::LamplighterLine {
        return Err(Error::Invalid("--eight needs --graph ll-z".into()));
    }
    let r = single_radius(&a.r)?;
    let rep = ll_z_eight_cover(a.sep, r, !a.uncorrected, &ctx.limits)?;
    let min_pairwise = match rep.min_pairwise {
        Distance::Exact(d) => json!(d),
        Distance::Beyond(cap) => json!(format!(">{cap}")),
    };
    let mut rec = json!({
        "v": 1,
        "kind": "eight_cover",
        "graph": ctx.spec.to_string(),
        "d": rep.d,
        "r": rep.r,
        "corrected": !a.uncorrected,
        "centers": strs(&rep.centers),
        "origin_distances": rep.origin_distances,
        "min_pairwise": min_pairwise,
        "status": if rep.check.is_covered() { "Cover" } else { "Fail" },
    });
    merge(&mut rec, check_json(&rep.check));
    rec["caps"] = ctx.caps();
    let text = summary_text(&rec);
    let covered = rep.check.is_covered();
    ctx.out.record(rec, || text);
    Ok(if covered {
        code::OK
    } else {
        code::CHECK_FAILED
    })
}

fn merge(into: &mut Value, from: Value) {
    if let (Some(a), Value::Object(b)) = (into.as_object_mut(), from) {
        a.extend(b);
    }
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn cmd_witness(ctx: &mut Ctx, a: &WitnessArgs) -> Result<u8, Error> {
    if ctx.out.mode() == OutMode::Grid {
        ctx.out.grid_fallback();
    }
    let graph = ctx.spec.to_string();
    if a.antipodal {
        let rec = match antipodal_witness(&ctx.spec, a.r, &ctx.limits)? {
            Some(p) => json!({"v": 1, "kind": "antipodal", "graph": graph, "r": a.r, "found": true,
                              "u": p.u.to_string(), "w": p.v.to_string(), "distance": p.distance}),
            None => json!({"v": 1, "kind": "antipodal", "graph": graph, "r": a.r, "found": false}),
        };
        let text = summary_text(&rec);
        ctx.out.record(rec, || text);
        return Ok(code::OK);
    }
    if a.spread {
        let min_pair = a.min_pair.unwrap_or(2 * a.r);
        let pool = match a.pool {
            Pool::Auto => SpreadPool::Auto,
            Pool::Sphere => SpreadPool::Sphere,
            Pool::Geodesic => SpreadPool::GeodesicConfigurations,
        };
        let res = spread_witness(&ctx.spec, a.r, a.n, min_pair, pool, &ctx.limits)?;
        let pool_name = match res.pool {
            SpreadPool::Sphere => "sphere",
            _ => "geodesic",
        };
        let rec = json!({
            "v": 1,
            "kind": "spread",
            "graph": graph,
            "r": a.r,
            "n": a.n,
            "min_pair": min_pair,
            "found": res.witnesses.is_some(),
            "witnesses": res.witnesses.as_deref().map(strs),
            "pairwise": res.pairwise.iter().map(|&(i, j, d)| json!([i, j, d])).collect::<Vec<_>>(),
            "pool": pool_name,
            "pool_size": res.pool_size,
            "exhaustive": res.exhaustive,
        });
        let text = summary_text(&rec);
        ctx.out.record(rec, || text);
        return Ok(code::OK);
    }
    let mode = if a.exact {
        SprawlMode::Exact
    } else {
        SprawlMode::Sampled {
            pairs: a.samples,
            seed: a.seed,
        }
    };
    let est = sprawl_estimate(&ctx.spec, a.r, mode, &ctx.limits)?;
    let mut rec = json!({
        "v": 1,
        "kind": "sprawl",
        "graph": graph,
        "r": a.r,
        "mode": if a.exact { "exact" } else { "sampled" },
        "mean": round6(est.mean),
        "std_error": est.std_error.map(round6),
        "pairs": est.pairs,
        "sphere_size": est.sphere_size,
    });
    if !a.exact {
        rec["seed"] = json!(a.seed);
    }
    let text = match est.std_error {
        Some(se) => format!("mean {:.6} ± {se:.6} over {} pairs", est.mean, est.pairs),
        None => format!("mean {:.6} over {} pairs", est.mean, est.pairs),
    };
    ctx.out.record(rec, || text);
    Ok(code::OK)
}
