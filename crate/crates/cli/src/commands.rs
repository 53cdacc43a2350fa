use std::fs;

use beg_core::expansion::{grand_partition, log_single_site_weight};
use beg_core::lattice::{brute_force_log_partition, stability_minimum};
use beg_core::polycube::{closed_form_ratio, for_each_rooted_animal, BoundTable, KnownCounts};
use beg_core::region::{
    all_temperature_check, constants_report, log_grid, region_boundary,
    region_boundary_first_principles, stability_constant, CriterionParameter,
};
use beg_core::trees::{py_inequality_check, random_py_instances, rational_to_f64, simplified_weight_bound, tree_summary};
use beg_core::{Budget, ModelParams, SiteSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::args::{
    BoundsArgs, Command, CriterionArgs, IdentityArgs, InequalityArgs, RegionArgs, Suite, TreesArgs,
};
use crate::error::CliError;
use crate::report::{exact, num, Meta, Report, Table};

/// Everything a subcommand needs besides its own arguments.
pub struct Context {
    pub budget: Budget,
    pub seed: u64,
    pub quiet: bool,
}

impl Context {
    fn progress(&self, msg: &str) {
        if !self.quiet {
            eprintln!("beg: {msg}");
        }
    }
}

/// A finished run: the report plus any relations that failed.
pub struct Outcome {
    pub report: Report,
    pub violations: Vec<String>,
}

pub fn run(command: &Command, ctx: &Context) -> Result<Outcome, CliError> {
    match command {
        Command::Region(a) => region(a, ctx),
        Command::CheckCriterion(a) => check_criterion(a, ctx),
        Command::VerifyIdentity(a) => verify_identity(a, ctx),
        Command::VerifyInequalities(a) => verify_inequalities(a, ctx),
        Command::Trees(a) => trees(a, ctx),
        Command::Bounds(a) => bounds(a, ctx),
    }
}

fn params(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn region(a: &RegionArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let boundary = if a.first_principles {
        region_boundary_first_principles(a.d)?
    } else {
        region_boundary(a.d)?
    };
    let report_consts = constants_report(a.d)?;
    let mut table = Table::new(&["y", "x_max", "branch", "k", "kbar"]);
    for (y, x, branch) in boundary.polyline(a.y_min, a.y_max, a.step)? {
        table.push(vec![num(y), num(x), json!(branch.id()), num(boundary.k), num(boundary.kbar)]);
    }
    let mut meta = Meta::new(
        "region",
        ctx.seed,
        params(&[
            ("d", json!(a.d)),
            ("y_min", num(a.y_min)),
            ("y_max", num(a.y_max)),
            ("step", num(a.step)),
            ("first_principles", json!(a.first_principles)),
        ]),
    );
    let c = report_consts.constants;
    for (k, v) in [
        ("k", report_consts.k),
        ("kbar", report_consts.kbar),
        ("k_first_principles", report_consts.k_first_principles),
        ("kbar_first_principles", report_consts.kbar_first_principles),
        ("k_with_59_56", report_consts.k_alt_5956),
        ("k_difference", report_consts.k_difference),
        ("kbar_difference", report_consts.kbar_difference),
        ("root_5_4", c.root54),
        ("root_7_4", c.root74),
        ("c_plus_over_d", c.c_plus),
        ("c_minus_over_d", c.c_minus),
    ] {
        meta.notes.insert(k.into(), num(v));
    }
    let (middle, lower) = boundary.jump();
    meta.notes.insert("jump_at_y_minus_1".into(), json!([num(middle), num(lower)]));
    Ok(Outcome {
        report: Report { meta, table },
        violations: Vec::new(),
    })
}

fn check_criterion(a: &CriterionArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let betas = match a.beta {
        Some(b) => vec![b],
        None => log_grid(a.beta_min, a.beta_max, a.beta_count)?,
    };
    let custom = a.a.map(CriterionParameter::from_a).transpose()?;
    let sweep = all_temperature_check(a.x, a.y, a.d, &betas)?;
    let mut cols = vec!["beta", "delta", "epsilon", "ratio", "value", "satisfied"];
    if custom.is_some() {
        cols.push("value_custom_a");
    }
    let mut table = Table::new(&cols);
    for (beta, t) in &sweep.points {
        let mut row = vec![num(*beta), num(t.delta), num(t.epsilon), num(t.ratio), num(t.value), json!(t.satisfied())];
        if let Some(c) = &custom {
            row.push(num(c.evaluate(t.delta, t.epsilon, a.d)));
        }
        table.push(row);
    }
    let mut meta = Meta::new(
        "check-criterion",
        ctx.seed,
        params(&[
            ("d", json!(a.d)),
            ("x", num(a.x)),
            ("y", num(a.y)),
            ("betas", json!(betas.len())),
            ("a", a.a.map_or(Value::Null, num)),
        ]),
    );
    meta.notes.insert("in_region".into(), json!(sweep.in_region));
    meta.notes.insert("max_value".into(), num(sweep.max_value));
    meta.notes.insert("argmax_beta".into(), num(sweep.argmax_beta));
    let violations = if sweep.consistent() {
        Vec::new()
    } else {
        vec![format!(
            "criterion value {} > 1 at beta = {} for a point inside the analytic region",
            sweep.max_value, sweep.argmax_beta
        )]
    };
    Ok(Outcome {
        report: Report { meta, table },
        violations,
    })
}

pub const IDENTITY_TOLERANCE: f64 = 1e-9;

fn verify_identity(a: &IdentityArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let sites = SiteSet::parse_box(&a.lattice, a.d)?;
    let points: Vec<(f64, f64, f64)> = match (a.samples, a.x, a.y, a.beta) {
        (Some(count), ..) => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
            (0..count)
                .map(|_| {
                    let x = -2.0 * (1.0 - rng.gen::<f64>());
                    (x, rng.gen_range(-3.0..=1.0), rng.gen_range(0.0..=3.0))
                })
                .collect()
        }
        (None, Some(x), Some(y), Some(beta)) => vec![(x, y, beta)],
        _ => return Err(CliError::Usage("give --x, --y and --beta, or --samples".into())),
    };
    let mut table = Table::new(&["x", "y", "beta", "sites", "log_z_brute", "log_single_site", "log_xi", "residual"]);
    let mut violations = Vec::new();
    for (x, y, beta) in points {
        let p = ModelParams::new(a.d, x, y, beta)?;
        let brute = brute_force_log_partition(&sites, &p, &ctx.budget)?;
        let xi = grand_partition(&sites, &p, &ctx.budget)?;
        let single = log_single_site_weight(&p);
        let log_xi = if xi > 0.0 { xi.ln() } else { f64::NAN };
        let residual = (brute - (sites.len() as f64 * single + log_xi)).abs();
        if !(residual <= IDENTITY_TOLERANCE) {
            violations.push(format!("residual {residual:e} at (x, y, beta) = ({x}, {y}, {beta})"));
        }
        table.push(vec![
            num(x),
            num(y),
            num(beta),
            json!(sites.len()),
            num(brute),
            num(single),
            num(log_xi),
            num(residual),
        ]);
    }
    let meta = Meta::new(
        "verify-identity",
        ctx.seed,
        params(&[
            ("lattice", json!(a.lattice)),
            ("d", json!(a.d)),
            ("x", a.x.map_or(Value::Null, num)),
            ("y", a.y.map_or(Value::Null, num)),
            ("beta", a.beta.map_or(Value::Null, num)),
            ("samples", json!(a.samples)),
        ]),
    );
    Ok(Outcome {
        report: Report { meta, table },
        violations,
    })
}

fn verify_inequalities(a: &InequalityArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let mut table = Table::new(&["suite", "case", "lhs", "rhs", "ok"]);
    let mut violations = Vec::new();
    let mut record = |table: &mut Table, suite: &str, case: String, lhs: f64, rhs: f64, ok: bool| {
        if !ok {
            violations.push(format!("{suite} {case}: {lhs} vs {rhs}"));
        }
        table.push(vec![json!(suite), json!(case), num(lhs), num(rhs), json!(ok)]);
    };
    let wants = |s: Suite| a.suite == Suite::All || a.suite == s;

    if wants(Suite::Py) {
        ctx.progress(&format!("tree-graph inequality on {} instances", a.count));
        for (i, inst) in random_py_instances(ctx.seed, a.count).iter().enumerate() {
            let c = py_inequality_check(&inst.sites, &inst.cfg, &inst.params, &ctx.budget)?;
            let agree = (c.lhs - c.lhs_by_subsets).abs() <= 1e-9 * (1.0 + c.lhs);
            let case = format!(
                "#{i} sites={} spins={} beta={} y={}",
                inst.sites.to_json(),
                inst.cfg,
                inst.params.beta,
                inst.params.y
            );
            record(&mut table, "py", case, c.lhs, c.rhs, c.ok && agree);
        }
    }
    if wants(Suite::Stability) {
        ctx.progress(&format!("stability minima for connected sets up to {} sites", a.max_sites));
        let ys: Vec<f64> = (0..13).map(|i| -2.0 + 0.25 * i as f64).collect();
        for n in 1..=a.max_sites {
            let mut failure = None;
            for_each_rooted_animal(2, n, &ctx.budget, |s| {
                for &y in &ys {
                    match stability_minimum(s, y, &ctx.budget) {
                        Ok((min, _)) => {
                            let floor = -stability_constant(y, 2) * n as f64;
                            record(
                                &mut table,
                                "stability",
                                format!("sites={} y={y}", s.to_json()),
                                min,
                                floor,
                                min >= floor - 1e-12,
                            );
                        }
                        Err(e) => {
                            failure.get_or_insert(e);
                        }
                    }
                }
            })?;
            if let Some(e) = failure {
                return Err(e.into());
            }
        }
    }
    if wants(Suite::Trees) {
        ctx.progress(&format!("embedding weights for trees up to {} vertices", a.max_vertices));
        for n in 1..=a.max_vertices {
            let s = tree_summary(n, 2, &ctx.budget)?;
            let bound = rational_to_f64(&s.c_n.bound);
            record(
                &mut table,
                "trees",
                format!("n={n} d=2 trees={}", s.tree_count),
                s.c_n.exact_f64(),
                bound,
                s.bounds_hold && s.c_n.within_bound(),
            );
        }
    }
    let meta = Meta::new(
        "verify-inequalities",
        ctx.seed,
        params(&[
            ("suite", json!(format!("{:?}", a.suite).to_lowercase())),
            ("count", json!(a.count)),
            ("max_sites", json!(a.max_sites)),
            ("max_vertices", json!(a.max_vertices)),
        ]),
    );
    Ok(Outcome {
        report: Report { meta, table },
        violations,
    })
}

fn trees(a: &TreesArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let mut table = Table::new(&[
        "n",
        "d",
        "trees",
        "c_n",
        "c_n_bound",
        "c_n_bound_value",
        "max_weight",
        "max_weight_bound",
        "simplified_bound",
        "bounds_hold",
    ]);
    let mut violations = Vec::new();
    for n in 1..=a.nmax {
        ctx.progress(&format!("trees on {n} vertices, d = {}", a.d));
        let s = tree_summary(n, a.d, &ctx.budget)?;
        if !s.bounds_hold {
            violations.push(format!("n = {n}: an embedding weight exceeds its bound"));
        }
        if !s.c_n.within_bound() {
            violations.push(format!("n = {n}: C_n exceeds its bound"));
        }
        let simplified = if n >= 2 {
            exact(simplified_weight_bound(n, a.d)?)
        } else {
            Value::Null
        };
        table.push(vec![
            json!(n),
            json!(a.d),
            json!(s.tree_count),
            exact(&s.c_n.exact),
            exact(&s.c_n.bound),
            num(rational_to_f64(&s.c_n.bound)),
            exact(&s.max_weight),
            exact(&s.max_weight_bound),
            simplified,
            json!(s.bounds_hold),
        ]);
    }
    let meta = Meta::new("trees", ctx.seed, params(&[("d", json!(a.d)), ("nmax", json!(a.nmax))]));
    Ok(Outcome {
        report: Report { meta, table },
        violations,
    })
}

fn bounds(a: &BoundsArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let known = match &a.known {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            Some(KnownCounts::from_json(&text)?)
        }
        None => None,
    };
    let reach = a.nmax.min(ctx.budget.polycube_cap(a.d));
    ctx.progress(&format!("enumerating fixed polycubes in d = {} up to n = {reach}", a.d));
    let t = BoundTable::build(a.d, a.nmax, known.as_ref(), &ctx.budget, a.workers)?;
    let mut table = Table::new(&["n", "a_n", "a_star", "source", "llp", "bs", "ratio", "closed_form_ratio"]);
    for r in &t.rows {
        let opt = |v: &Option<_>| v.as_ref().map_or(Value::Null, exact);
        table.push(vec![
            json!(r.n),
            opt(&r.a_n),
            opt(&r.a_star),
            exact(r.source),
            exact(&r.llp),
            exact(&r.bs),
            exact(&r.ratio),
            exact(closed_form_ratio(a.d, r.n)?),
        ]);
    }
    let mut meta = Meta::new(
        "bounds",
        ctx.seed,
        params(&[
            ("d", json!(a.d)),
            ("nmax", json!(a.nmax)),
            ("known", json!(a.known.as_ref().map(|p| p.display().to_string()))),
        ]),
    );
    meta.notes.insert("enumerated_up_to".into(), json!(reach));
    Ok(Outcome {
        report: Report { meta, table },
        violations: t.violations(),
    })
}
