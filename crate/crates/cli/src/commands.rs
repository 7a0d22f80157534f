use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::Duration;

use anyhow::{Context, Result};
use diffcyc::enumerate::{classify_with, ClassifyOptions, Registry};
use diffcyc::invariants::{
    abelianization, export_presentation, fundamental_group, homology, is_2_neighborly,
    is_orientable, tietze_simplify,
};
use diffcyc::lens::{
    fixture_report, h1_order, lens_member_report, lens_series, lens_type_of_series, winding_solve,
    LensFixture, LensReport,
};
use diffcyc::series::{
    dense_extendable, enumerate_dense_series, extend_dense, extend_order_l, minimal_start,
    order_l_admissible, reduce_by_unit,
};
use diffcyc::slicing::{parity_class, slicing};
use diffcyc::topology::{is_combinatorial_manifold, is_connected};
use diffcyc::CyclicComplex;
use serde_json::{json, Value};

use crate::input::{load_complex, load_spec, parse_vertex_list, InputError};
use crate::{Cli, Command, Format, InputArgs, LensCommand, SeriesCommand};

/// Version of the JSON documents written by every command.
pub const SCHEMA_VERSION: u32 = 1;

/// A time limit stopped the classifier before it finished; mapped to exit code 4.
#[derive(Debug)]
pub struct ResourceLimit(pub String);

impl std::fmt::Display for ResourceLimit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ResourceLimit {}

struct Report {
    command: &'static str,
    json: Value,
    text: String,
}

fn emit(cli: &Cli, report: Report) -> Result<()> {
    let body = match cli.format {
        Format::Json => {
            let mut doc = json!({"schema_version": SCHEMA_VERSION, "command": report.command});
            if let (Value::Object(dst), Value::Object(src)) = (&mut doc, report.json) {
                dst.extend(src);
            }
            let mut s = serde_json::to_string_pretty(&doc)?;
            s.push('\n');
            s
        }
        Format::Text => report.text,
    };
    match &cli.out {
        Some(path) => {
            std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn complex_of(cli: &Cli, args: &InputArgs) -> Result<CyclicComplex> {
    load_complex(
        args.input.as_deref(),
        args.n,
        args.index,
        &Registry::new(&cli.registry),
    )
}

pub fn run(cli: &Cli) -> Result<()> {
    let report = match &cli.command {
        Command::Verify(args) => verify(&complex_of(cli, args)?)?,
        Command::Invariants {
            input,
            export,
            budget,
        } => {
            let c = complex_of(cli, input)?;
            let (report, gap) = invariants(&c, *budget)?;
            if let Some(path) = export {
                std::fs::write(path, gap).with_context(|| format!("writing {}", path.display()))?;
            }
            report
        }
        Command::Series(sub) => series(cli, sub)?,
        Command::Lens(sub) => lens(sub)?,
        Command::Classify {
            n,
            jobs,
            time_limit,
            checkpoint_every,
        } => classify(cli, *n, *jobs, *time_limit, *checkpoint_every as usize)?,
        Command::Slicing { input, part } => slicing_cmd(&complex_of(cli, input)?, part)?,
    };
    emit(cli, report)
}

fn verify(c: &CyclicComplex) -> Result<Report> {
    let k = c.expand();
    let manifold = is_combinatorial_manifold(c)?;
    let f = k.f_vector();
    let connected = is_connected(&k);
    let neighborly = is_2_neighborly(&k);
    let text = format!(
        "complex       {c}\nvertices      {}\nmanifold      {manifold}\nf-vector      {f}\nconnected     {connected}\n2-neighborly  {neighborly}\n",
        c.n()
    );
    Ok(Report {
        command: "verify",
        json: json!({
            "complex": c.to_string(),
            "n": c.n(),
            "dimension": c.dim(),
            "manifold": manifold,
            "fvector": f.0,
            "connected": connected,
            "neighborly": neighborly,
        }),
        text,
    })
}

fn invariants(c: &CyclicComplex, budget: usize) -> Result<(Report, String)> {
    let k = c.expand();
    let h = homology(&k);
    let orientable = is_orientable(&k).ok();
    let raw = fundamental_group(&k)?;
    let simplified = tietze_simplify(&raw, budget);
    let (rank, torsion) = abelianization(&simplified);
    let gap = export_presentation(&simplified) + "\n";
    let orient_text = orientable.map_or("n/a".to_string(), |o| o.to_string());
    let text = format!(
        "complex       {c}\nhomology      {h}\norientable    {orient_text}\npi_1          {simplified}\nabelianized   {}\n",
        abelian_text(rank, &torsion)
    );
    let report = Report {
        command: "invariants",
        json: json!({
            "complex": c.to_string(),
            "homology": h,
            "homology_text": h.to_string(),
            "orientable": orientable,
            "fundamental_group": {
                "generators": simplified.generators,
                "relators": simplified.relators,
                "text": simplified.to_string(),
                "raw_generators": raw.generators,
                "raw_relators": raw.relators.len(),
            },
            "abelianization": {"rank": rank, "torsion": torsion},
        }),
        text,
    };
    Ok((report, gap))
}

fn abelian_text(rank: usize, torsion: &[u64]) -> String {
    let mut terms: Vec<String> = Vec::new();
    match rank {
        0 => {}
        1 => terms.push("Z".into()),
        r => terms.push(format!("Z^{r}")),
    }
    terms.extend(torsion.iter().map(|t| format!("Z_{t}")));
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn series(cli: &Cli, sub: &SeriesCommand) -> Result<Report> {
    Ok(match sub {
        SeriesCommand::Check(args) => {
            let c = complex_of(cli, args)?;
            let r = dense_extendable(&c)?;
            let text = format!(
                "complex        {}\nrotated        {:?}\nmargins        {:?}\nverdict        {}\nminimal start  {}\n",
                r.complex,
                r.rotated,
                r.margins,
                if r.passes { "PASS" } else { "FAIL" },
                r.minimal_start
            );
            Report {
                command: "series check",
                json: serde_json::to_value(&r)?,
                text,
            }
        }
        SeriesCommand::Extend { input, k } => {
            let c = complex_of(cli, input)?;
            let m = extend_dense(&c, *k)?;
            let manifold = is_combinatorial_manifold(&m)?;
            Report {
                command: "series extend",
                json: json!({"base": c.to_string(), "k": k, "member": m.to_string(), "n": m.n(), "manifold": manifold}),
                text: format!("{m}\n"),
            }
        }
        SeriesCommand::Minimal(args) => {
            let c = complex_of(cli, args)?;
            let (shift, m) = minimal_start(&c)?;
            Report {
                command: "series minimal",
                json: json!({"complex": c.to_string(), "shift": shift, "start": m.to_string(), "n": m.n()}),
                text: format!("shift {shift}\nstart {m}\nvertices {}\n", m.n()),
            }
        }
        SeriesCommand::Order { spec, k } => {
            let s = load_spec(spec)?;
            let admissible = order_l_admissible(&s);
            let member = match k {
                Some(k) => Some(extend_order_l(&s, *k)?),
                None => None,
            };
            let mut text = format!("order       {}\nadmissible  {admissible}\n", s.order());
            if let Some(m) = &member {
                let _ = writeln!(text, "member      {m}");
            }
            Report {
                command: "series order",
                json: json!({
                    "spec": s.to_json(),
                    "admissible": admissible,
                    "k": k,
                    "member": member.map(|m| m.to_string()),
                }),
                text,
            }
        }
        SeriesCommand::Reduce { spec } => {
            let s = load_spec(spec)?;
            let r = reduce_by_unit(&s)?;
            Report {
                command: "series reduce",
                json: json!({"spec": s.to_json(), "dense": r.dense.to_json(), "k0": r.k0}),
                text: format!("k0     {}\ndense  {}\n", r.k0, r.dense.to_json()),
            }
        }
        SeriesCommand::Census { n } => {
            let census = enumerate_dense_series(&Registry::new(&cli.registry), *n)?;
            let mut text = format!(
                "dense series starting on at most {n} vertices: {}\n",
                census.count
            );
            for s in &census.starts {
                let _ = writeln!(
                    text,
                    "{}:{}  {}  margins {:?}",
                    s.n, s.index, s.complex, s.margins
                );
            }
            if !census.missing.is_empty() {
                let _ = writeln!(text, "missing classifications for n = {:?}", census.missing);
            }
            Report {
                command: "series census",
                json: serde_json::to_value(&census)?,
                text,
            }
        }
    })
}

fn lens_text(r: &LensReport) -> String {
    let mut text = format!(
        "{} on {} vertices\nhomology  {}\n",
        r.label, r.n, r.homology
    );
    for c in &r.checks {
        let _ = writeln!(
            text,
            "[{}] {}: {}",
            if c.passed { "ok" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let _ = writeln!(
        text,
        "verdict   {}",
        if r.passed() { "PASS" } else { "FAIL" }
    );
    text
}

fn lens(sub: &LensCommand) -> Result<Report> {
    Ok(match sub {
        LensCommand::Gen { k } => {
            let c = lens_series(*k);
            Report {
                command: "lens gen",
                json: json!({"k": k, "n": c.n(), "complex": c.to_string()}),
                text: format!("{c}\n"),
            }
        }
        LensCommand::Verify { k, fixture } => {
            let r = match (k, fixture) {
                (Some(k), _) => lens_member_report(*k)?,
                (None, Some(name)) => {
                    let which: LensFixture = name
                        .parse()
                        .map_err(|e: diffcyc::Error| InputError(e.to_string()))?;
                    fixture_report(which)?
                }
                (None, None) => unreachable!("clap requires --k or --fixture"),
            };
            let mut json = serde_json::to_value(&r)?;
            json["passed"] = json!(r.passed());
            Report {
                command: "lens verify",
                text: lens_text(&r),
                json,
            }
        }
        LensCommand::Type { k } => {
            let t = lens_type_of_series(*k)?;
            let w = winding_solve(*k)?;
            Report {
                command: "lens type",
                json: json!({"k": k, "p": t.p, "q": t.q, "type": t.to_string(), "h1_order": h1_order(*k), "winding": w}),
                text: format!("{t}\n"),
            }
        }
    })
}

fn classify(
    cli: &Cli,
    n: u32,
    jobs: usize,
    time_limit: Option<f64>,
    every: usize,
) -> Result<Report> {
    let registry = Registry::new(&cli.registry);
    std::fs::create_dir_all(registry.root())
        .with_context(|| format!("creating {}", registry.root().display()))?;
    let checkpoint = registry.checkpoint_path(n);
    let opts = ClassifyOptions {
        jobs,
        time_limit: time_limit.map(Duration::from_secs_f64),
        checkpoint: Some(checkpoint.clone()),
        checkpoint_every: every,
    };
    let r = classify_with(n, &opts)?;
    if !r.complete {
        return Err(ResourceLimit(format!(
            "time limit reached for n = {n}; progress saved to {}, rerun to resume",
            checkpoint.display()
        ))
        .into());
    }
    registry.store(&r)?;
    log::info!("classified n = {n} in {} ms", r.elapsed_ms);
    Ok(Report {
        command: "classify",
        json: json!({
            "n": n,
            "complexes": r.complex_count(),
            "multiplier_classes": r.multiplier_class_count(),
            "iso_classes": r.iso_class_count(),
            "homology_types": r.homology_type_count(),
            "registry": registry.data_path(n),
            "stats": r.stats,
        }),
        text: format!("{}\n", r.table_row()),
    })
}

fn slicing_cmd(c: &CyclicComplex, part: &str) -> Result<Report> {
    let side: BTreeSet<u32> = match part {
        "odd" => parity_class(c.n(), true),
        "even" => parity_class(c.n(), false),
        list => parse_vertex_list(list)?.into_iter().collect(),
    };
    let s = slicing(&c.expand(), &side)?;
    let f = s.f_vector();
    let surface = s
        .surface_type()
        .map(|t| {
            format!(
                "{} genus {}",
                if t.orientable {
                    "orientable"
                } else {
                    "non-orientable"
                },
                t.genus
            )
        })
        .unwrap_or_else(|e| e.to_string());
    let mut json = s.to_json();
    json["complex"] = json!(c.to_string());
    json["connected"] = json!(s.is_connected());
    Ok(Report {
        command: "slicing",
        json,
        text: format!(
            "complex          {c}\nvertices         {}\nedges            {}\ntriangles        {}\nquadrilaterals   {}\neuler            {}\nconnected        {}\nsurface          {surface}\n",
            f.vertices,
            f.edges,
            f.triangles,
            f.quadrilaterals,
            f.euler_characteristic(),
            s.is_connected()
        ),
    })
}
