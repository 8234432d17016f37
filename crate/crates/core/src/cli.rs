//! Command-line front end and the JSON and SVG file formats it speaks.
//!
//! Exit codes: 0 success, 1 when the answer is "no" (not colorable, no
//! claw, a failed gadget check), 2 on bad input with an error document on
//! stderr.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::coloring::{solve_3coloring, verify_coloring, PartialColoring};
use crate::error::{Error, Result};
use crate::gadgets::{fixture_names, fixtures_named, verify_fixture};
use crate::geometry::{format_rational, parse_rational, to_f64, Point, Polygon, Segment, ThresholdPolicy};
use crate::lemmas::{find_induced_k16, perturb_general_position, scale_to_unit};
use crate::reduce_poly::{compile_planar, decode_graph_coloring, PlanarInput, PolyCertificate};
use crate::reduce_sat::{compile_nae3sat, decode_assignment, Formula, ReductionCertificate};
use crate::visibility::{udvg, visibility, Graph, Reach, Scene};

pub const SCENE_VERSION: &str = "1";

type Xy = [String; 2];

#[derive(Serialize, Deserialize)]
struct RawScene {
    version: String,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Xy>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    segments: Option<Vec<[Xy; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    polygon: Option<RawPolygon>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    metadata: BTreeMap<String, Value>,
}

#[derive(Serialize, Deserialize)]
struct RawPolygon {
    outer: Vec<Xy>,
    #[serde(default)]
    holes: Vec<Vec<Xy>>,
}

/// A scene with its format version and free-form metadata. Coordinates are
/// exact rationals written as strings.
#[derive(Clone, Debug, PartialEq)]
pub struct SceneDocument {
    pub version: String,
    pub scene: Scene,
    pub metadata: BTreeMap<String, Value>,
}

fn xy(p: &Point) -> Xy {
    [format_rational(&p.x), format_rational(&p.y)]
}

fn point(c: &Xy) -> Result<Point> {
    Point::parse(&c[0], &c[1])
}

impl SceneDocument {
    pub fn new(scene: Scene) -> Self {
        SceneDocument { version: SCENE_VERSION.into(), scene, metadata: BTreeMap::new() }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawScene = serde_json::from_str(text).map_err(|e| Error::Parse(format!("scene: {e}")))?;
        if raw.version != SCENE_VERSION {
            return Err(Error::Parse(format!("unsupported scene version {:?}", raw.version)));
        }
        let missing = |what: &str| Error::Parse(format!("{} scene has no {what} field", raw.kind));
        let ring = |r: &Vec<Xy>| r.iter().map(point).collect::<Result<Vec<_>>>();
        let scene = match raw.kind.as_str() {
            "points" => Scene::Points(raw.points.as_ref().ok_or_else(|| missing("points"))?.iter().map(point).collect::<Result<_>>()?),
            "segments" => Scene::Segments(
                raw.segments
                    .as_ref()
                    .ok_or_else(|| missing("segments"))?
                    .iter()
                    .map(|[a, b]| Segment::new(point(a)?, point(b)?))
                    .collect::<Result<_>>()?,
            ),
            "polygon" => {
                let p = raw.polygon.as_ref().ok_or_else(|| missing("polygon"))?;
                Scene::Polygon(Polygon::new(ring(&p.outer)?, p.holes.iter().map(ring).collect::<Result<_>>()?)?)
            }
            other => return Err(Error::Parse(format!("unknown scene kind {other:?}"))),
        };
        scene.validate()?;
        Ok(SceneDocument { version: raw.version, scene, metadata: raw.metadata })
    }

    pub fn to_json(&self) -> String {
        let mut raw = RawScene {
            version: self.version.clone(),
            kind: self.scene.kind().into(),
            points: None,
            segments: None,
            polygon: None,
            metadata: self.metadata.clone(),
        };
        match &self.scene {
            Scene::Points(p) => raw.points = Some(p.iter().map(xy).collect()),
            Scene::Segments(s) => raw.segments = Some(s.iter().map(|s| [xy(&s.a), xy(&s.b)]).collect()),
            Scene::Polygon(p) => {
                raw.polygon = Some(RawPolygon {
                    outer: p.outer.iter().map(xy).collect(),
                    holes: p.holes.iter().map(|h| h.iter().map(xy).collect()).collect(),
                })
            }
        }
        serde_json::to_string(&raw).expect("scene serializes") + "\n"
    }
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default)]
    labels: BTreeMap<usize, String>,
}

pub fn graph_to_json(g: &Graph) -> String {
    let raw = RawGraph { n: g.n, edges: g.edges().map(|(u, v)| [u, v]).collect(), labels: g.labels.clone() };
    serde_json::to_string(&raw).expect("graph serializes") + "\n"
}

pub fn graph_from_json(text: &str) -> Result<Graph> {
    let raw: RawGraph = serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph: {e}")))?;
    for &[u, v] in &raw.edges {
        if u >= raw.n || v >= raw.n || u == v {
            return Err(Error::Validation(format!("bad edge [{u}, {v}] for n = {}", raw.n)));
        }
    }
    if let Some((&v, _)) = raw.labels.iter().find(|(&v, _)| v >= raw.n) {
        return Err(Error::Validation(format!("label for missing vertex {v}")));
    }
    let mut g = Graph::from_edges(raw.n, raw.edges.iter().map(|&[u, v]| (u, v)));
    g.labels = raw.labels;
    Ok(g)
}

const PX: f64 = 100.0;
const MARGIN: f64 = 0.25;

/// SVG drawing at 100 pixels per unit with y pointing up. Scene strokes have
/// class `scene`, visibility edges class `edge`, disks of diameter one class
/// `disk`, and vertices class `vertex`.
pub fn render_svg(scene: &Scene, disks: bool, edges: Option<&Graph>) -> String {
    let pts: Vec<(f64, f64)> = scene.vertices().iter().map(|p| (to_f64(&p.x), to_f64(&p.y))).collect();
    let pad = if disks { MARGIN + 0.5 } else { MARGIN };
    let fold = |f: fn(f64, f64) -> f64, init: f64, c: fn(&(f64, f64)) -> f64| pts.iter().map(c).fold(init, f);
    let (x0, x1) = (fold(f64::min, 0.0, |p| p.0), fold(f64::max, 0.0, |p| p.0));
    let (y0, y1) = (fold(f64::min, 0.0, |p| p.1), fold(f64::max, 0.0, |p| p.1));
    let (x0, y1) = if pts.is_empty() { (0.0, 0.0) } else { (x0, y1) };
    let (x1, y0) = if pts.is_empty() { (0.0, 0.0) } else { (x1, y0) };
    let sx = |x: f64| (x - x0 + pad) * PX;
    let sy = |y: f64| (y1 - y + pad) * PX;
    let (w, h) = ((x1 - x0 + 2.0 * pad) * PX, (y1 - y0 + 2.0 * pad) * PX);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#);
    s.push_str("<style>.scene{stroke:#000;stroke-width:2;fill:none}.edge{stroke:#c33;stroke-width:1}.disk{fill:#36c;fill-opacity:0.08;stroke:#36c;stroke-width:0.5}.vertex{fill:#000}</style>\n");
    if disks {
        for &(x, y) in &pts {
            let _ = writeln!(s, r#"<circle class="disk" cx="{:.2}" cy="{:.2}" r="{:.2}"/>"#, sx(x), sy(y), PX / 2.0);
        }
    }
    match scene {
        Scene::Points(_) => {}
        Scene::Segments(_) => {
            for c in pts.chunks(2) {
                let _ = writeln!(
                    s,
                    r#"<line class="scene" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
                    sx(c[0].0),
                    sy(c[0].1),
                    sx(c[1].0),
                    sy(c[1].1)
                );
            }
        }
        Scene::Polygon(p) => {
            let mut at = 0;
            for ring in std::iter::once(&p.outer).chain(&p.holes) {
                let coords: Vec<String> =
                    pts[at..at + ring.len()].iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
                let _ = writeln!(s, r#"<polygon class="scene" points="{}"/>"#, coords.join(" "));
                at += ring.len();
            }
        }
    }
    if let Some(g) = edges {
        for (u, v) in g.edges() {
            let ((a, b), (c, d)) = (pts[u], pts[v]);
            let _ = writeln!(
                s,
                r#"<line class="edge" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#,
                sx(a),
                sy(b),
                sx(c),
                sy(d)
            );
        }
    }
    for &(x, y) in &pts {
        let _ = writeln!(s, r#"<circle class="vertex" cx="{:.2}" cy="{:.2}" r="3"/>"#, sx(x), sy(y));
    }
    s.push_str("</svg>\n");
    s
}

#[derive(Parser)]
#[command(name = "udvg", about = "Unit disk visibility graphs: build, color, reduce, render")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Closed,
    Strict,
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Nae3sat,
    Planar3col,
}

#[derive(Subcommand)]
enum Command {
    /// Visibility graph of a scene.
    Build {
        scene: PathBuf,
        #[arg(long, value_enum, default_value = "closed")]
        policy: PolicyArg,
        /// Ignore the unit distance limit.
        #[arg(long)]
        unbounded: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact 3-coloring of a graph; exits 1 when none exists.
    Color {
        graph: PathBuf,
        /// JSON list of [vertex, color] pairs to fix in advance.
        #[arg(long)]
        precolor: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compile a problem instance into a scene.
    Reduce {
        #[arg(value_enum)]
        problem: Problem,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Map a scene coloring back to the problem instance.
    Decode {
        #[arg(value_enum)]
        problem: Problem,
        input: PathBuf,
        #[arg(long)]
        cert: PathBuf,
        /// Coloring document as written by `color`.
        #[arg(long)]
        coloring: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw a scene as SVG.
    Render {
        scene: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        disks: bool,
        /// Also draw the unit disk visibility edges.
        #[arg(long)]
        edges: bool,
    },
    /// Write a bundled gadget scene and its reference graph.
    Gadget {
        name: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        reference: Option<PathBuf>,
    },
    /// Check bundled gadgets against their reference graphs and coloring properties.
    Verify {
        #[command(subcommand)]
        what: VerifyWhat,
    },
    /// Lemma operations over scenes.
    Lemma {
        #[command(subcommand)]
        op: LemmaOp,
    },
}

#[derive(Subcommand)]
enum VerifyWhat {
    /// A gadget by name, or `all`.
    Gadget { name: String },
}

#[derive(Subcommand)]
enum LemmaOp {
    /// Shrink a scene so every coordinate lies in (-1/2, 1/2).
    Scale {
        scene: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Find an induced K1,6 in the scene's unit disk visibility graph; exits 1 if none.
    K16 {
        scene: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Move the points of a point scene into general position.
    Perturb {
        scene: PathBuf,
        #[arg(long, default_value = "1/1000")]
        budget: String,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Parses `args` (program name first), runs the command, and returns the
/// exit code. Normal output goes to `out`, error documents to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let doc = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            let _ = writeln!(err, "{doc}");
            2
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_scene(path: &Path) -> Result<Scene> {
    Ok(SceneDocument::parse(&read(path)?)?.scene)
}

fn json_line<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("value serializes") + "\n"
}

fn coloring_doc(coloring: Option<&[u8]>) -> String {
    match coloring {
        Some(c) => json_line(&serde_json::json!({ "colorable": true, "coloring": c })),
        None => json_line(&serde_json::json!({ "colorable": false })),
    }
}

fn read_coloring(path: &Path) -> Result<Vec<u8>> {
    #[derive(Deserialize)]
    struct Doc {
        coloring: Vec<u8>,
    }
    let doc: Doc = serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(format!("coloring: {e}")))?;
    Ok(doc.coloring)
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Build { scene, policy, unbounded, output } => {
            let scene = read_scene(&scene)?;
            if scene.is_empty() {
                return Err(Error::Validation("scene has no vertices".into()));
            }
            let reach = match (unbounded, policy) {
                (true, _) => Reach::Unbounded,
                (false, PolicyArg::Closed) => Reach::Unit(ThresholdPolicy::Closed),
                (false, PolicyArg::Strict) => Reach::Unit(ThresholdPolicy::Strict),
            };
            emit(out, output.as_deref(), &graph_to_json(&visibility(&scene, reach)?))?;
            Ok(0)
        }
        Command::Color { graph, precolor, output } => {
            let g = graph_from_json(&read(&graph)?)?;
            let pre: PartialColoring = match precolor {
                Some(p) => {
                    let pairs: Vec<(usize, u8)> =
                        serde_json::from_str(&read(&p)?).map_err(|e| Error::Parse(format!("precoloring: {e}")))?;
                    if let Some(&(v, c)) = pairs.iter().find(|&&(v, c)| v >= g.n || c > 2) {
                        return Err(Error::Validation(format!("bad precolor entry [{v}, {c}]")));
                    }
                    pairs.into_iter().collect()
                }
                None => PartialColoring::new(),
            };
            let found = solve_3coloring(&g, &pre);
            if let Some(c) = &found {
                debug_assert!(verify_coloring(&g, c).unwrap_or(false));
            }
            emit(out, output.as_deref(), &coloring_doc(found.as_deref()))?;
            Ok(if found.is_some() { 0 } else { 1 })
        }
        Command::Reduce { problem, input, output, cert } => {
            let text = read(&input)?;
            let (scene, cert_json) = match problem {
                Problem::Nae3sat => {
                    let (s, c) = compile_nae3sat(&Formula::parse(&text)?);
                    (s, json_line(&c))
                }
                Problem::Planar3col => {
                    let (s, c) = compile_planar(&PlanarInput::parse(&text)?)?;
                    (s, json_line(&c))
                }
            };
            emit(out, output.as_deref(), &SceneDocument::new(scene).to_json())?;
            if let Some(p) = cert {
                std::fs::write(p, cert_json)?;
            }
            Ok(0)
        }
        Command::Decode { problem, input, cert, coloring, output } => {
            let text = read(&input)?;
            let col = read_coloring(&coloring)?;
            let cert_text = read(&cert)?;
            let bad_cert = |e: serde_json::Error| Error::Parse(format!("certificate: {e}"));
            let doc = match problem {
                Problem::Nae3sat => {
                    let c: ReductionCertificate = serde_json::from_str(&cert_text).map_err(bad_cert)?;
                    let a = decode_assignment(&Formula::parse(&text)?, &c, &col)?;
                    serde_json::json!({ "assignment": a })
                }
                Problem::Planar3col => {
                    let c: PolyCertificate = serde_json::from_str(&cert_text).map_err(bad_cert)?;
                    let input = PlanarInput::parse(&text)?;
                    let decoded = decode_graph_coloring(&input, &c, &col)?;
                    let named: BTreeMap<&str, u8> = input.vertices.iter().map(|v| v.id.as_str()).zip(decoded).collect();
                    serde_json::json!({ "coloring": named })
                }
            };
            emit(out, output.as_deref(), &json_line(&doc))?;
            Ok(0)
        }
        Command::Render { scene, output, disks, edges } => {
            let scene = read_scene(&scene)?;
            let g = if edges { Some(udvg(&scene)?) } else { None };
            emit(out, output.as_deref(), &render_svg(&scene, disks, g.as_ref()))?;
            Ok(0)
        }
        Command::Gadget { name, output, reference } => {
            let f = fixtures_named(&name)?.into_iter().next().expect("every gadget name has a fixture");
            emit(out, output.as_deref(), &SceneDocument::new(f.scene).to_json())?;
            if let Some(p) = reference {
                std::fs::write(p, graph_to_json(&f.reference))?;
            }
            Ok(0)
        }
        Command::Verify { what: VerifyWhat::Gadget { name } } => {
            let names: Vec<&str> = if name == "all" { fixture_names().to_vec() } else { vec![name.as_str()] };
            let mut ok = true;
            for n in names {
                for f in fixtures_named(n)? {
                    for c in verify_fixture(&f)? {
                        ok &= c.passed;
                        writeln!(out, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.fixture, c.property)?;
                    }
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
        Command::Lemma { op } => lemma(op, out),
    }
}

fn lemma(op: LemmaOp, out: &mut dyn Write) -> Result<i32> {
    match op {
        LemmaOp::Scale { scene, output } => {
            let scene = read_scene(&scene)?;
            let pts = scale_to_unit(&scene.vertices())?;
            let scaled = match &scene {
                Scene::Points(_) => Scene::Points(pts),
                Scene::Segments(_) => Scene::Segments(
                    pts.chunks(2).map(|c| Segment::new(c[0].clone(), c[1].clone())).collect::<Result<_>>()?,
                ),
                Scene::Polygon(p) => {
                    let mut rest = pts.into_iter();
                    let outer = rest.by_ref().take(p.outer.len()).collect();
                    let holes = p.holes.iter().map(|h| rest.by_ref().take(h.len()).collect()).collect();
                    Scene::Polygon(Polygon::new(outer, holes)?)
                }
            };
            emit(out, output.as_deref(), &SceneDocument::new(scaled).to_json())?;
            Ok(0)
        }
        LemmaOp::K16 { scene, output } => {
            let g = udvg(&read_scene(&scene)?)?;
            let found = find_induced_k16(&g);
            let doc = match &found {
                Some(c) => serde_json::json!({ "found": true, "center": c.center, "leaves": c.leaves }),
                None => serde_json::json!({ "found": false }),
            };
            emit(out, output.as_deref(), &json_line(&doc))?;
            Ok(if found.is_some() { 0 } else { 1 })
        }
        LemmaOp::Perturb { scene, budget, output } => {
            let Scene::Points(pts) = read_scene(&scene)? else {
                return Err(Error::Validation("perturb expects a point scene".into()));
            };
            let moved = perturb_general_position(&pts, &parse_rational(&budget)?)?;
            emit(out, output.as_deref(), &SceneDocument::new(Scene::Points(moved)).to_json())?;
            Ok(0)
        }
    }
}
