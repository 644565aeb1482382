use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use plgcat_core::collapse::{is_collapsible, strong_collapse_core, CollapsibilityVerdict};
use plgcat_core::corpus::{self, Payload};
use plgcat_core::covers::{normalize_graph_intersection, relocate_leaves, search_cover2, strong_cover, verify_cover, CoverSearchVerdict, SearchMode, SearchOptions};
use plgcat_core::io::{self, ClpsStep, IoError};
use plgcat_core::one_relator::{build_presentation_complex, classify_plgcat, parse_presentation, LowerEvidence, OneRelatorError};
use plgcat_core::polygonal::{one_word_reduction, realize, word_to_string, PasteRule, TransformationStep};
use plgcat_core::structure::{no2_criterion, No2Checklist, No2Verdict, StructureError};
use plgcat_core::{analyze, homology, Cover, SimplicialComplex};
use serde_json::{json, Value};

use crate::{Cli, Command, CorpusAction, CoverMode, Global, PolygonalAction, PresentationAction};

#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub msg: String,
}

impl CliError {
    fn new(code: &'static str, msg: impl Into<String>) -> Self {
        CliError { code, msg: msg.into() }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        let code = match &e {
            IoError::Read { .. } => "read",
            IoError::Parse { .. } => "parse",
            IoError::Complex(_) => "complex",
            IoError::Collapse(_) => "collapse",
            IoError::Cover(_) => "cover",
            IoError::Polygonal(_) => "polygonal",
            IoError::Corpus(_) => "corpus",
            IoError::Mismatch(_) => "verify",
        };
        CliError::new(code, e.to_string())
    }
}

macro_rules! via_io {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                IoError::from(e).into()
            }
        }
    )*};
}

via_io!(
    plgcat_core::ComplexError,
    plgcat_core::collapse::CollapseError,
    plgcat_core::covers::CoverError,
    plgcat_core::polygonal::PolygonalError,
    plgcat_core::corpus::CorpusError
);

impl From<OneRelatorError> for CliError {
    fn from(e: OneRelatorError) -> Self {
        CliError::new("presentation", e.to_string())
    }
}

impl From<StructureError> for CliError {
    fn from(e: StructureError) -> Self {
        CliError::new("structure", e.to_string())
    }
}

/// Text for stdout, and whether the verdict is definitive (exit 0) or
/// Unknown (exit 2).
pub struct Outcome {
    pub text: String,
    pub definitive: bool,
}

type Result<T> = std::result::Result<T, CliError>;

pub fn run(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    let (value, text, definitive) = match &cli.command {
        Command::Analyze { input } => analyze_cmd(input)?,
        Command::Homology { input } => homology_cmd(input)?,
        Command::Collapse { input, strong } => collapse_cmd(g, input, *strong)?,
        Command::Cover { mode } => cover_cmd(g, mode)?,
        Command::Criterion { input } => criterion_cmd(input)?,
        Command::Presentation { action } => presentation_cmd(g, action)?,
        Command::Polygonal { action } => polygonal_cmd(g, action)?,
        Command::Corpus { action } => corpus_cmd(g, action)?,
        Command::Verify { file } => verify_cmd(file)?,
    };
    let text = if g.json {
        let mut s = serde_json::to_string_pretty(&value).map_err(|e| CliError::new("json", e.to_string()))?;
        s.push('\n');
        s
    } else {
        text
    };
    Ok(Outcome { text, definitive })
}

type Reply = (Value, String, bool);

fn load(input: &str) -> Result<SimplicialComplex> {
    Ok(io::load_complex(input, None)?)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::new("write", format!("{}: {e}", path.display())))
}

fn base_dir(file: &Path) -> PathBuf {
    file.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn absolute(p: &Path) -> PathBuf {
    std::fs::canonicalize(p).unwrap_or_else(|_| p.to_path_buf())
}

/// How a file written to `out` should refer to `input`: corpus references
/// stay as they are, a file in the same directory by its name, anything
/// else by absolute path.
fn reference_from(out: &Path, input: &str) -> String {
    if input.starts_with("corpus:") {
        return input.to_string();
    }
    let target = absolute(Path::new(input));
    let out_dir = absolute(&base_dir(&absolute_parent(out)));
    match (target.parent(), target.file_name()) {
        (Some(dir), Some(name)) if dir == out_dir => name.to_string_lossy().into_owned(),
        _ => target.display().to_string(),
    }
}

/// `out` with its directory made absolute, even when the file does not exist yet.
fn absolute_parent(out: &Path) -> PathBuf {
    let dir = base_dir(out);
    let dir = if dir.as_os_str().is_empty() { PathBuf::from(".") } else { dir };
    absolute(&dir).join(out.file_name().unwrap_or_default())
}

fn f_vector(k: &SimplicialComplex) -> String {
    let f = k.f_vector();
    format!("({}, {}, {})", f[0], f[1], f[2])
}

fn list<T: std::fmt::Display>(xs: &[T]) -> String {
    if xs.is_empty() {
        return "none".into();
    }
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn analyze_cmd(input: &str) -> Result<Reply> {
    let k = load(input)?;
    let r = analyze(&k);
    let mut t = String::new();
    let dim = r.dim.map_or("empty".to_string(), |d| d.to_string());
    let _ = writeln!(t, "dim: {dim}");
    let _ = writeln!(t, "f_vector: {}", f_vector(&k));
    let _ = writeln!(t, "euler_characteristic: {}", r.euler_characteristic);
    let _ = writeln!(t, "homogeneous: {}", r.homogeneous);
    let _ = writeln!(t, "strongly_connected: {}", r.strongly_connected);
    let _ = writeln!(t, "inner_connected: {}", r.inner_connected);
    let _ = writeln!(t, "pseudosurface: {}", r.pseudosurface);
    let _ = writeln!(t, "inner_edges: {}", r.inner_edges.len());
    let _ = writeln!(t, "boundary_edges: {}", r.boundary_edges.len());
    let _ = writeln!(t, "splittable_vertices: {}", list(&r.splittable_vertices));
    let _ = writeln!(t, "disconnected_link_vertices: {}", list(&r.disconnected_link_vertices));
    let _ = writeln!(t, "singular_vertices: {}", list(&r.singular_vertices));
    Ok((json!(r), t, true))
}

fn homology_cmd(input: &str) -> Result<Reply> {
    let k = load(input)?;
    let h = homology(&k);
    let mut t = format!("{}\n", list(&h.betti));
    for (d, tor) in h.torsion.iter().enumerate() {
        if !tor.is_empty() {
            let parts: Vec<String> = tor.iter().map(|x| format!("Z/{x}")).collect();
            let _ = writeln!(t, "torsion H{d}: {}", parts.join(" + "));
        }
    }
    let torsion: Vec<Vec<String>> = h.torsion.iter().map(|t| t.iter().map(|x| x.to_string()).collect()).collect();
    Ok((json!({ "betti": h.betti, "torsion": torsion }), t, true))
}

fn collapse_cmd(g: &Global, input: &str, strong: bool) -> Result<Reply> {
    let k = load(input)?;
    if strong {
        let c = strong_collapse_core(&k);
        c.verify()?;
        let point = c.end.len() == 1;
        let t = if point {
            format!("strong collapsible ({} vertex removals)\n", c.steps.len())
        } else {
            format!("strong core with f-vector {} after {} vertex removals\n", f_vector(&c.end), c.steps.len())
        };
        if let Some(out) = &g.output {
            let steps: Vec<ClpsStep> = c.steps.iter().map(|s| ClpsStep::Strong(*s)).collect();
            write_file(out, &io::write_clps(&reference_from(out, input), &steps))?;
        }
        let v = json!({ "strong": true, "collapsible": point, "steps": c.steps.len(), "core_f_vector": c.end.f_vector() });
        return Ok((v, t, true));
    }
    let verdict = is_collapsible(&k, g.budget)?;
    let (steps, t, v, definitive) = match &verdict {
        CollapsibilityVerdict::Collapsible(c) => {
            c.verify_to_point()?;
            let t = format!("collapsible ({} collapses)\n", c.steps.len());
            (c.steps.clone(), t, json!({ "verdict": "collapsible", "steps": c.steps.len() }), true)
        }
        CollapsibilityVerdict::NotCollapsible(p) => {
            let t = format!(
                "not collapsible: no free face left at f-vector {} after {} collapses\n",
                f_vector(&p.stuck),
                p.steps.len()
            );
            let v = json!({ "verdict": "not_collapsible", "steps": p.steps.len(), "stuck_f_vector": p.stuck.f_vector() });
            (p.steps.clone(), t, v, true)
        }
        CollapsibilityVerdict::Unknown { nodes_expanded } => {
            let t = format!("Unknown: budget exhausted after {nodes_expanded} collapses\n");
            (vec![], t, json!({ "verdict": "unknown", "nodes": nodes_expanded }), false)
        }
    };
    if let (Some(out), true) = (&g.output, definitive) {
        let steps: Vec<ClpsStep> = steps.into_iter().map(ClpsStep::Elementary).collect();
        write_file(out, &io::write_clps(&reference_from(out, input), &steps))?;
    }
    Ok((v, t, definitive))
}

fn check_cover(k: &SimplicialComplex, cover: &Cover) -> Result<()> {
    let r = verify_cover(k, cover);
    if r.ok() {
        Ok(())
    } else {
        Err(CliError::new("verify", format!("cover fails verification: missing {:?}, extra {:?}", r.missing, r.extra)))
    }
}

fn cover_summary(cover: &Cover) -> (Value, String) {
    let inter = cover.intersection();
    let sizes: Vec<usize> = cover.pieces.iter().map(|p| p.len()).collect();
    let mut t = format!("pieces = {}\n", cover.len());
    for (i, p) in cover.pieces.iter().enumerate() {
        let _ = writeln!(t, "piece {}: f-vector {}", i + 1, f_vector(p));
    }
    let idim = inter.dim().map_or("empty".to_string(), |d| d.to_string());
    let _ = writeln!(t, "intersection: dim {idim}, f-vector {}", f_vector(&inter));
    let v = json!({ "pieces": cover.len(), "piece_sizes": sizes, "intersection_f_vector": inter.f_vector() });
    (v, t)
}

fn load_cover_file(path: &Path) -> Result<(Cover, String)> {
    let file = io::parse_cover(&io::read_text(path)?)?;
    let parent_ref = file.parent.clone().ok_or_else(|| CliError::new("parse", format!("{}: missing 'parent' line", path.display())))?;
    let base = base_dir(path);
    let parent = io::load_complex(&parent_ref, Some(&base))?;
    let cover = io::load_cover(&file, parent, Some(&base))?;
    let resolved = if parent_ref.starts_with("corpus:") || Path::new(&parent_ref).is_absolute() {
        parent_ref
    } else {
        base.join(&parent_ref).display().to_string()
    };
    Ok((cover, resolved))
}

fn cover_cmd(g: &Global, mode: &CoverMode) -> Result<Reply> {
    match mode {
        CoverMode::Strong { input } => {
            let k = load(input)?;
            let sc = strong_cover(&k)?;
            let k2 = sc.subdivision.complex();
            check_cover(k2, &sc.cover)?;
            if let Some(out) = &g.output {
                let parent_path = out.with_extension("parent.sc");
                write_file(&parent_path, &io::write_sc(k2))?;
                let name = parent_path.file_name().unwrap_or_default().to_string_lossy().into_owned();
                write_file(out, &io::write_cover(Some(&name), &sc.cover.pieces, &[]))?;
            }
            let (v, body) = cover_summary(&sc.cover);
            let t = format!("strong-collapsible cover of the second subdivision, f-vector {}\n{body}", f_vector(k2));
            Ok((v, t, true))
        }
        CoverMode::Search2 { input, full } => {
            let k = load(input)?;
            let mode = if *full { SearchMode::Full } else { SearchMode::Auto };
            let verdict = search_cover2(&k, SearchOptions { budget: g.budget, mode, reverse: false })?;
            match verdict {
                CoverSearchVerdict::Found(c) => {
                    check_cover(&k, &c)?;
                    if let Some(out) = &g.output {
                        write_file(out, &io::write_cover(Some(&reference_from(out, input)), &c.pieces, &[]))?;
                    }
                    let (mut v, body) = cover_summary(&c);
                    v["verdict"] = json!("found");
                    Ok((v, format!("Found\n{body}"), true))
                }
                CoverSearchVerdict::NotFoundExhausted { nodes, mode } => {
                    let t = format!("NotFound: no cover by two collapsible subcomplexes ({mode:?} search exhausted after {nodes} nodes)\n");
                    Ok((json!({ "verdict": "not_found", "nodes": nodes, "mode": mode }), t, true))
                }
                CoverSearchVerdict::Unknown { nodes } => {
                    let t = format!("Unknown: budget exhausted after {nodes} nodes\n");
                    Ok((json!({ "verdict": "unknown", "nodes": nodes }), t, false))
                }
            }
        }
        CoverMode::Normalize { cover } | CoverMode::Relocate { cover } => {
            let (c, parent_ref) = load_cover_file(cover)?;
            let k = c.parent.clone();
            let result = match mode {
                CoverMode::Normalize { .. } => normalize_graph_intersection(&k, &c)?,
                _ => relocate_leaves(&k, &c)?,
            };
            check_cover(&result.parent, &result)?;
            if let Some(out) = &g.output {
                if result.parent == k {
                    let r = reference_from(out, &parent_ref);
                    write_file(out, &io::write_cover(Some(&r), &result.pieces, &[]))?;
                } else {
                    let parent_path = out.with_extension("parent.sc");
                    write_file(&parent_path, &io::write_sc(&result.parent))?;
                    let name = parent_path.file_name().unwrap_or_default().to_string_lossy().into_owned();
                    write_file(out, &io::write_cover(Some(&name), &result.pieces, &[]))?;
                }
            }
            let (v, body) = cover_summary(&result);
            let t = if result.parent == k { body } else { format!("parent subdivided to f-vector {}\n{body}", f_vector(&result.parent)) };
            Ok((v, t, true))
        }
    }
}

fn checklist_text(c: &No2Checklist) -> String {
    let mut t = String::new();
    for (name, item) in c.items() {
        let mark = if item.holds { "x" } else { " " };
        let _ = writeln!(t, "[{mark}] {name}: {}", item.evidence);
    }
    t
}

fn criterion_cmd(input: &str) -> Result<Reply> {
    let k = load(input)?;
    let verdict = no2_criterion(&k);
    let t = match &verdict {
        No2Verdict::Certificate(c) => format!("plgcat = {}\n{}", c.plgcat, checklist_text(&c.checklist)),
        No2Verdict::Inapplicable { checklist, failing } => {
            format!("criterion inapplicable (failing: {})\n{}", failing.join(", "), checklist_text(checklist))
        }
    };
    Ok((json!(verdict), t, true))
}

fn lower_text(e: &LowerEvidence) -> String {
    match e {
        LowerEvidence::Trivial => "every polyhedron needs one piece".into(),
        LowerEvidence::NontrivialHomology(h) => format!("not contractible: {h}"),
        LowerEvidence::Boundaryless(s) => format!("no free edge: {s}"),
        LowerEvidence::TriangulationNotCollapsible => "this triangulation does not collapse".into(),
        LowerEvidence::UnusedGenerators(g) => format!("unused generators {}", g.iter().collect::<String>()),
        LowerEvidence::NoTwoCover { no2: Some(_) } => "no algebraic collapse; criterion certificate attached".into(),
        LowerEvidence::NoTwoCover { no2: None } => "no algebraic collapse and not exceptional".into(),
    }
}

fn presentation_cmd(g: &Global, action: &PresentationAction) -> Result<Reply> {
    match action {
        PresentationAction::Build { presentation } => {
            let p = parse_presentation(presentation)?;
            let pc = build_presentation_complex(&p, true)?;
            let sc = io::write_sc(&pc.complex);
            let v = json!({ "presentation": p.to_string(), "f_vector": pc.complex.f_vector(), "wedge": pc.wedge });
            let t = match &g.output {
                Some(out) => {
                    write_file(out, &sc)?;
                    format!("{p}: f-vector {}, wedge vertex {}\n", f_vector(&pc.complex), pc.wedge)
                }
                None => sc,
            };
            Ok((v, t, true))
        }
        PresentationAction::Classify { presentation } => {
            let p = parse_presentation(presentation)?;
            let r = classify_plgcat(&p)?;
            r.upper_evidence.verify().map_err(|e| CliError::new("verify", e))?;
            let lower: Vec<String> = r.lower_evidence.iter().map(lower_text).collect();
            let mut t = format!("presentation = {}\n", r.presentation);
            let _ = writeln!(t, "lower = {} ({})", r.lower, lower.join("; "));
            let _ = writeln!(t, "upper = {} ({}, verified)", r.upper, r.upper_method);
            match r.exact {
                Some(x) => {
                    let _ = writeln!(t, "plgcat = {x}");
                }
                None => {
                    let _ = writeln!(t, "{} <= plgcat <= {}", r.lower, r.upper);
                }
            }
            let v = json!({
                "presentation": r.presentation,
                "lower": r.lower,
                "lower_evidence": lower,
                "upper": r.upper,
                "upper_method": r.upper_method,
                "exact": r.exact,
            });
            Ok((v, t, true))
        }
    }
}

fn step_text(s: &TransformationStep) -> String {
    match s {
        TransformationStep::Reflection { word } => format!("reflect {word}"),
        TransformationStep::Rotation { word, times } => format!("rotate {word} {times}"),
        TransformationStep::Pasting { first, second, symbol } => format!("paste {first} {second} {symbol}"),
    }
}

fn polygonal_cmd(g: &Global, action: &PolygonalAction) -> Result<Reply> {
    match action {
        PolygonalAction::Realize { input } => {
            let p = io::parse_poly(&io::read_text(input)?)?;
            let k = realize(&p)?;
            let sc = io::write_sc(&k);
            let v = json!({ "f_vector": k.f_vector(), "euler_characteristic": k.euler_characteristic() });
            let t = match &g.output {
                Some(out) => {
                    write_file(out, &sc)?;
                    format!("f-vector {}, euler characteristic {}\n", f_vector(&k), k.euler_characteristic())
                }
                None => sc,
            };
            Ok((v, t, true))
        }
        PolygonalAction::Reduce { input, any_inner_edge } => {
            let k = load(input)?;
            let rule = if *any_inner_edge { PasteRule::AnyInnerEdge } else { PasteRule::NonSingular };
            let r = one_word_reduction(&k, rule)?;
            let word = &r.result.words[0];
            let mut log = format!(
                "# {} words from {} triangles{}\n",
                r.initial.words.len(),
                r.complex.f_vector()[2],
                if r.subdivided { " of the second subdivision" } else { "" }
            );
            for s in &r.steps {
                let _ = writeln!(log, "# {}", step_text(s));
            }
            let _ = writeln!(log, "# result: one word of length {}", word.len());
            let poly = io::write_poly(&r.result);
            let t = match &g.output {
                Some(out) => {
                    write_file(out, &poly)?;
                    log
                }
                None => format!("{log}{poly}"),
            };
            let steps: Vec<String> = r.steps.iter().map(step_text).collect();
            let v = json!({
                "subdivided": r.subdivided,
                "initial_words": r.initial.words.len(),
                "steps": steps,
                "word": word_to_string(word),
                "length": word.len(),
            });
            Ok((v, t, true))
        }
    }
}

fn corpus_cmd(g: &Global, action: &CorpusAction) -> Result<Reply> {
    match action {
        CorpusAction::List => {
            let mut t = String::new();
            let mut rows = Vec::new();
            for name in corpus::list() {
                let e = corpus::get(name)?;
                let _ = writeln!(t, "{name:<18} {:<12} {}", format!("{:?}", e.kind()).to_lowercase(), e.description);
                rows.push(json!({ "name": name, "kind": e.kind(), "description": e.description }));
            }
            Ok((Value::Array(rows), t, true))
        }
        CorpusAction::Get { name } => {
            let e = corpus::get(name)?;
            let payload = match &e.payload {
                Payload::Complex(k) => io::write_sc(k),
                Payload::Presentation(s) => format!("{s}\n"),
                Payload::Polygonal(p) => io::write_poly(p),
            };
            let mut header = format!("# {}: {}\n", e.name, e.description);
            for x in &e.expected {
                let _ = writeln!(header, "# expected {} ({:?})", x.invariant, x.provenance);
            }
            let expected: Vec<String> = e.expected.iter().map(|x| x.invariant.to_string()).collect();
            let v = json!({ "name": e.name, "kind": e.kind(), "description": e.description, "payload": payload, "expected": expected });
            let t = match &g.output {
                Some(out) => {
                    write_file(out, &payload)?;
                    header
                }
                None => format!("{header}{payload}"),
            };
            Ok((v, t, true))
        }
    }
}

fn verify_cmd(file: &Path) -> Result<Reply> {
    let ext = file.extension().and_then(|e| e.to_str()).unwrap_or("");
    match ext {
        "sc" => {
            let k = io::parse_sc(&io::read_text(file)?)?;
            let t = format!("valid complex: f-vector {}\n", f_vector(&k));
            Ok((json!({ "kind": "complex", "f_vector": k.f_vector() }), t, true))
        }
        "clps" => {
            let c = io::parse_clps(&io::read_text(file)?)?;
            let start = io::load_complex(&c.start, Some(&base_dir(file)))?;
            let end = io::replay_clps(&start, &c.steps)?;
            let t = if end.len() == 1 {
                format!("valid: {} steps collapse {} to a point\n", c.steps.len(), c.start)
            } else {
                format!("valid: {} steps from {} end at f-vector {}\n", c.steps.len(), c.start, f_vector(&end))
            };
            Ok((json!({ "kind": "collapse", "steps": c.steps.len(), "end_f_vector": end.f_vector() }), t, true))
        }
        "cover" => {
            let (c, parent) = load_cover_file(file)?;
            check_cover(&c.parent, &c)?;
            let t = format!("valid: {} collapsible pieces cover {parent}\n", c.len());
            Ok((json!({ "kind": "cover", "pieces": c.len() }), t, true))
        }
        "poly" => {
            let p = io::parse_poly(&io::read_text(file)?)?;
            let k = realize(&p)?;
            let h = homology(&k);
            let t = format!("valid: {} words, euler characteristic {}, {h}\n", p.words.len(), k.euler_characteristic());
            Ok((json!({ "kind": "polygonal", "words": p.words.len(), "euler_characteristic": k.euler_characteristic() }), t, true))
        }
        other => Err(CliError::new("usage", format!("cannot verify '.{other}' files; expected .sc, .clps, .cover or .poly"))),
    }
}
