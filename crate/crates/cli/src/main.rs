use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use conley::algebra::PrimeField;
use conley::complex::SimplexSet;
use conley::dynamics::{invariant_part, is_isolated_invariant_set, IndexPair};
use conley::mvf::{classify_rearrangement, rearrangement_path, AtomicRearrangement, MultivectorField};
use conley::scene::{load_scene, parse_zigzag, Scene};
use conley::tracking::{conley_index, run_protocol, ProtocolOptions, TrackingTrace};
use conley::zigzag::{pair_betti, Arrow, pair_zigzag_barcode, Bar, Barcode};

#[derive(Parser, Debug)]
#[command(name = "conley", version, about = "Conley-index tracking for combinatorial multivector fields")]
struct Cli {
    /// Characteristic of the coefficient field.
    #[arg(long = "field-char", default_value_t = 2, global = true)]
    field_char: u32,
    /// Continue through unresolved steps with the naive intersection zigzag.
    #[arg(long = "heuristic-g", global = true)]
    heuristic_g: bool,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check fields, atomicity of consecutive fields and the seed.
    Validate { scene: PathBuf },
    /// Conley index of a set (the seed by default).
    Conley {
        scene: PathBuf,
        /// 1-based field index.
        #[arg(long, default_value_t = 1)]
        field: usize,
        /// A simplex of the set, as labels ("CFG") or ids ("2,5,6"); repeatable.
        #[arg(long = "simplex")]
        simplices: Vec<String>,
    },
    /// Run the tracking protocol from the seed.
    Track { scene: PathBuf },
    /// Barcode of a standalone zigzag file.
    Barcode { zigzag: PathBuf },
    /// Atomic path between two fields of a scene (first and last by default).
    RearrangePath {
        scene: PathBuf,
        #[arg(long)]
        from: Option<usize>,
        #[arg(long)]
        to: Option<usize>,
    },
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure { code: 2, error: e.into() }
    }
}

struct Output {
    body: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => match emit(cli.out.as_deref(), &out.body) {
            Ok(()) => ExitCode::from(out.code),
            Err(e) => {
                eprintln!("error: {}", describe(&e));
                ExitCode::from(2)
            }
        },
        Err(f) => {
            eprintln!("error: {}", describe(&f.error));
            ExitCode::from(f.code)
        }
    }
}

/// The error chain, skipping causes already spelled out by their parent.
fn describe(e: &anyhow::Error) -> String {
    let mut msg = String::new();
    for cause in e.chain() {
        let text = cause.to_string();
        if msg.contains(&text) {
            continue;
        }
        if !msg.is_empty() {
            msg.push_str(": ");
        }
        msg.push_str(&text);
    }
    msg
}

fn emit(path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, body).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let field = PrimeField::new(cli.field_char).map_err(|e| anyhow!("--field-char: {e}"))?;
    match &cli.command {
        Command::Validate { scene } => validate(cli, &read_scene(scene, field)?),
        Command::Conley {
            scene,
            field: index,
            simplices,
        } => conley_cmd(cli, &read_scene(scene, field)?, *index, simplices),
        Command::Track { scene } => track(cli, &read_scene(scene, field)?),
        Command::Barcode { zigzag } => barcode_cmd(cli, zigzag, field),
        Command::RearrangePath { scene, from, to } => {
            rearrange(&read_scene(scene, field)?, *from, *to)
        }
    }
}

fn read_scene(path: &Path, field: PrimeField) -> Result<Scene> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut scene = load_scene(&text).with_context(|| format!("loading {}", path.display()))?;
    if field != PrimeField::TWO {
        scene.fields = scene.fields.iter().map(|f| f.with_prime(field)).collect();
    }
    Ok(scene)
}

fn render(cli: &Cli, text: String, value: Value) -> String {
    match cli.format {
        Format::Text => text,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).expect("json");
            s.push('\n');
            s
        }
    }
}

fn seed_problems(field: &MultivectorField, s: &SimplexSet) -> Vec<String> {
    let mut out = Vec::new();
    if s.is_empty() {
        out.push("seed is empty; tracking needs a nonempty isolated invariant set".into());
        return out;
    }
    if !field.is_compatible(s) {
        out.push("seed is not a union of multivectors of field 1".into());
    }
    if !field.complex().is_convex(s) {
        out.push("seed is not convex".into());
    }
    if invariant_part(field, s) != *s {
        out.push("seed is not invariant under field 1".into());
    }
    out
}

fn validate(cli: &Cli, scene: &Scene) -> Result<Output, Failure> {
    let mut problems = Vec::new();
    if scene.fields.is_empty() {
        problems.push("scene has no fields".to_string());
    }
    let rearrangements: Vec<Value> = scene
        .fields
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let kind = match classify_rearrangement(&w[0], &w[1]) {
                Ok(AtomicRearrangement::Refinement { .. }) => "refinement",
                Ok(AtomicRearrangement::Coarsening { .. }) => "coarsening",
                Err(_) => "invalid",
            };
            json!({"from": i + 1, "to": i + 2, "kind": kind})
        })
        .collect();
    match (&scene.seed, scene.fields.first()) {
        (None, _) => problems.push("scene has no seed".into()),
        (Some(s), Some(f)) => problems.extend(seed_problems(f, s)),
        _ => {}
    }
    let ok = problems.is_empty();
    let mut text = format!(
        "complex: {} simplices, dimension {}\nfields: {}\n",
        scene.complex.len(),
        scene.complex.dim(),
        scene.fields.len()
    );
    for (i, f) in scene.fields.iter().enumerate() {
        text.push_str(&format!("  field {}: {} multivectors\n", i + 1, f.len()));
    }
    for r in &rearrangements {
        text.push_str(&format!("  {} -> {}: {}\n", r["from"], r["to"], r["kind"].as_str().unwrap_or("")));
    }
    for p in &problems {
        text.push_str(&format!("FAIL: {p}\n"));
    }
    if ok {
        text.push_str("OK\n");
    }
    let value = json!({
        "ok": ok,
        "simplices": scene.complex.len(),
        "fields": scene.fields.iter().map(|f| f.len()).collect::<Vec<_>>(),
        "rearrangements": rearrangements,
        "problems": problems,
    });
    Ok(Output {
        body: render(cli, text, value),
        code: if ok { 0 } else { 2 },
    })
}

fn conley_cmd(cli: &Cli, scene: &Scene, index: usize, simplices: &[String]) -> Result<Output, Failure> {
    let field = index
        .checked_sub(1)
        .and_then(|i| scene.fields.get(i))
        .ok_or_else(|| anyhow!("field {index} does not exist (scene has {})", scene.fields.len()))?;
    let set = if simplices.is_empty() {
        scene.seed.clone().ok_or_else(|| anyhow!("no --simplex given and the scene has no seed"))?
    } else {
        let parsed = simplices
            .iter()
            .map(|s| scene.parse_simplex(s).with_context(|| format!("simplex {s:?}")))
            .collect::<Result<Vec<_>>>()?;
        scene.complex.set_from_simplices(&parsed)?
    };
    if !is_isolated_invariant_set(field, &set) {
        return Err(anyhow!("the set is not an isolated invariant set of field {index}").into());
    }
    let betti = conley_index(field, &set);
    let text = format!("Conley index over field {index}: {betti}\n");
    let value = json!({
        "field": index,
        "set": scene.render_set(&set),
        "betti": betti.0,
    });
    Ok(Output {
        body: render(cli, text, value),
        code: 0,
    })
}

fn bars_value(bars: &[Bar]) -> Value {
    Value::Array(
        bars.iter()
            .map(|b| json!({"dim": b.dim, "birth": b.birth, "death": b.death}))
            .collect(),
    )
}

fn step_chart(bars: &[Bar], n: usize) -> String {
    let mut out = String::new();
    for b in bars {
        let line: String = (1..=n)
            .map(|i| if b.birth <= i && i <= b.death { '█' } else { '·' })
            .collect();
        out.push_str(&format!(
            "Dimension: {}  fields [{}, {}]  {}\n",
            b.dim, b.birth, b.death, line
        ));
    }
    out
}

fn arrow_name(a: Arrow) -> &'static str {
    match a {
        Arrow::Forward => "forward",
        Arrow::Backward => "backward",
    }
}

fn pair_sizes(p: &IndexPair) -> Value {
    json!({"p": p.p.len(), "e": p.e.len()})
}

fn track(cli: &Cli, scene: &Scene) -> Result<Output, Failure> {
    let seed = scene.seed.clone().ok_or_else(|| anyhow!("scene has no seed"))?;
    if let Some(first) = scene.fields.first() {
        let problems = seed_problems(first, &seed);
        if !problems.is_empty() {
            return Err(anyhow!(problems.join("; ")).into());
        }
    }
    let trace = run_protocol(&scene.fields, &seed, ProtocolOptions {
        heuristic_g: cli.heuristic_g,
    })?;
    let text = track_text(scene, &trace);
    let value = track_json(scene, &trace);
    Ok(Output {
        body: render(cli, text, value),
        code: if trace.broken { 3 } else { 0 },
    })
}

fn track_text(scene: &Scene, trace: &TrackingTrace) -> String {
    let mut text = format!("seed: {{{}}}\n", scene.render_set(&trace.seed).join(", "));
    for step in &trace.steps {
        text.push_str(&format!(
            "step {} -> {}: case {}  |S| = {}  |S'| = {}",
            step.index,
            step.index + 1,
            step.case.letter(),
            step.s.len(),
            step.s_next.len()
        ));
        if let Some(q) = &step.connecting {
            text.push_str(&format!("  pair |P| = {} |E| = {}", q.p.len(), q.e.len()));
        }
        if let Some(z) = &step.segment {
            text.push_str(&format!("  segment of {} pairs", z.len()));
        }
        if step.heuristic {
            text.push_str("  (heuristic)");
        }
        text.push('\n');
        for n in &step.notes {
            text.push_str(&format!("    note: {n}\n"));
        }
    }
    if trace.broken {
        text.push_str(&format!(
            "stopped: unresolved step after field {}; rerun with --heuristic-g to continue\n",
            trace.fields_covered
        ));
    }
    if trace.vanished {
        text.push_str(&format!("stopped: invariant set vanished at field {}\n", trace.fields_covered));
    }
    text.push_str(&format!("zigzag: {} pairs\n", trace.zigzag.len()));
    text.push_str(&trace.barcode.render_text());
    text.push_str(&format!("by field (1..{}):\n", trace.fields_covered));
    text.push_str(&step_chart(&trace.step_bars, trace.fields_covered));
    text
}

fn track_json(scene: &Scene, trace: &TrackingTrace) -> Value {
    let steps: Vec<Value> = trace
        .steps
        .iter()
        .map(|s| {
            json!({
                "index": s.index,
                "case": s.case,
                "rearrangement": if s.rearrangement.is_refinement() { "refinement" } else { "coarsening" },
                "s_size": s.s.len(),
                "s_next_size": s.s_next.len(),
                "s_next": scene.render_set(&s.s_next),
                "hull_size": s.hull.as_ref().map(|h| h.len()),
                "pair": s.connecting.as_ref().map(pair_sizes),
                "segment_length": s.segment.as_ref().map(|z| z.len()),
                "heuristic": s.heuristic,
                "notes": s.notes,
            })
        })
        .collect();
    let step_index: Vec<Value> = trace
        .zigzag
        .tags()
        .iter()
        .map(|t| json!({"birth_field": t.birth_step(), "death_field": t.death_step()}))
        .collect();
    json!({
        "seed": scene.render_set(&trace.seed),
        "steps": steps,
        "fields_covered": trace.fields_covered,
        "broken": trace.broken,
        "vanished": trace.vanished,
        "heuristic_used": trace.heuristic_used,
        "zigzag": {
            "length": trace.zigzag.len(),
            "pairs": trace.zigzag.pairs().iter().map(pair_sizes).collect::<Vec<_>>(),
            "arrows": trace.zigzag.arrows().iter().map(|a| arrow_name(*a)).collect::<Vec<_>>(),
        },
        "barcode": {"length": trace.barcode.length, "bars": bars_value(&trace.barcode.bars)},
        "step_index": step_index,
        "step_bars": bars_value(&trace.step_bars),
    })
}

fn barcode_cmd(cli: &Cli, path: &Path, field: PrimeField) -> Result<Output, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let z = parse_zigzag(&text).with_context(|| format!("loading {}", path.display()))?;
    let barcode: Barcode = pair_zigzag_barcode(&z.complex, &z.zigzag, field);
    let betti = pair_betti(&z.complex, &z.zigzag, field);
    let symbols: Vec<String> = z.zigzag.arrows().iter().map(|a| a.to_string()).collect();
    let arrows: Vec<&str> = z.zigzag.arrows().iter().map(|a| arrow_name(*a)).collect();
    let mut out = format!("zigzag: {} pairs  {}\n", z.zigzag.len(), symbols.join(" "));
    for (i, b) in betti.iter().enumerate() {
        out.push_str(&format!("  H(P{0}, E{0}) = {1}\n", i + 1, b));
    }
    out.push_str(&barcode.render_text());
    let value = json!({
        "length": barcode.length,
        "arrows": arrows,
        "betti": betti.iter().map(|b| b.0.clone()).collect::<Vec<_>>(),
        "bars": bars_value(&barcode.bars),
    });
    Ok(Output {
        body: render(cli, out, value),
        code: 0,
    })
}

fn rearrange(scene: &Scene, from: Option<usize>, to: Option<usize>) -> Result<Output, Failure> {
    let n = scene.fields.len();
    let pick = |i: usize| {
        i.checked_sub(1)
            .and_then(|j| scene.fields.get(j))
            .ok_or_else(|| anyhow!("field {i} does not exist (scene has {n})"))
    };
    let a = pick(from.unwrap_or(1))?;
    let b = pick(to.unwrap_or(n))?;
    let path = rearrangement_path(a, b)?;
    let out = Scene {
        name: scene.name.clone(),
        labels: scene.labels.clone(),
        complex: scene.complex.clone(),
        fields: path,
        seed: scene.seed.clone(),
    };
    let mut body = out.to_json_string();
    body.push('\n');
    Ok(Output { body, code: 0 })
}
