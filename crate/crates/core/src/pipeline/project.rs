use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use regex::Regex;
use walkdir::WalkDir;

use super::PipelineError;

/// Figure filter used when none is given on the command line.
pub const DEFAULT_FIGURE_FILTER: &str = r"^.*figures/figure(\d+)/figure(_\d+)?\.svg";

/// One document directory inside a project.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CTree {
    pub id: String,
    pub fulltext: Option<PathBuf>,
    /// `(index, svg path)` for every `figures/figure<N>/figure.svg`, by index.
    pub figures: Vec<(u32, PathBuf)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusProject {
    pub root: PathBuf,
    pub trees: Vec<CTree>,
}

/// A figure selected by a filter, with its path relative to the project root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FigureRef {
    pub tree_id: String,
    pub index: u32,
    pub svg_path: PathBuf,
    pub relative_path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPaths {
    pub csv: PathBuf,
    pub annotated_svg: PathBuf,
    pub report: PathBuf,
}

fn is_hidden(name: &str) -> bool {
    name.starts_with('.')
}

fn sorted_dirs(dir: &Path) -> Result<Vec<(String, PathBuf)>, PipelineError> {
    let mut out = Vec::new();
    let entries = match fs::read_dir(dir) {
        Ok(e) => e,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
        Err(e) => return Err(PipelineError::io(dir, e)),
    };
    for entry in entries {
        let entry = entry.map_err(|e| PipelineError::io(dir, e))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if entry.path().is_dir() && !is_hidden(&name) {
            out.push((name, entry.path()));
        }
    }
    out.sort();
    Ok(out)
}

impl CorpusProject {
    /// Reads the tree layout under `root`. Every non-hidden subdirectory is
    /// a tree; figures are the `figures/figure<N>` folders holding a
    /// `figure.svg`.
    pub fn scan(root: &Path) -> Result<CorpusProject, PipelineError> {
        if !root.is_dir() {
            return Err(PipelineError::Io {
                path: root.display().to_string(),
                message: "not a directory".to_string(),
            });
        }
        let mut trees = Vec::new();
        for (id, dir) in sorted_dirs(root)? {
            let fulltext = Some(dir.join("fulltext.pdf")).filter(|p| p.is_file());
            let mut figures = Vec::new();
            for (name, fig_dir) in sorted_dirs(&dir.join("figures"))? {
                let Some(index) = name.strip_prefix("figure").and_then(|n| n.parse::<u32>().ok()) else {
                    continue;
                };
                let svg = fig_dir.join("figure.svg");
                if index >= 1 && svg.is_file() {
                    figures.push((index, svg));
                }
            }
            figures.sort();
            figures.dedup_by_key(|f| f.0);
            trees.push(CTree { id, fulltext, figures });
        }
        Ok(CorpusProject {
            root: root.to_path_buf(),
            trees,
        })
    }

    pub fn figure_count(&self) -> usize {
        self.trees.iter().map(|t| t.figures.len()).sum()
    }
}

/// Compiles a filter that must match the whole path string.
fn full_match(filter: &str) -> Result<Regex, PipelineError> {
    Regex::new(&format!("^(?:{filter})$")).map_err(|e| PipelineError::BadFilter(e.to_string()))
}

fn path_text(p: &Path) -> String {
    p.to_string_lossy().replace('\\', "/")
}

#[derive(Debug, Clone, PartialEq)]
enum TemplatePart {
    Literal(String),
    Group(usize),
}

/// Splits a template into literals and group references. `(\N)` and `\N`
/// both insert capture group `N`.
fn parse_template(template: &str) -> Vec<TemplatePart> {
    static GROUP: std::sync::LazyLock<Regex> =
        std::sync::LazyLock::new(|| Regex::new(r"\(\\(\d+)\)|\\(\d+)").expect("valid regex"));
    let mut parts = Vec::new();
    let mut last = 0;
    for caps in GROUP.captures_iter(template) {
        let whole = caps.get(0).expect("group 0");
        if whole.start() > last {
            parts.push(TemplatePart::Literal(template[last..whole.start()].to_string()));
        }
        let digits = caps.get(1).or_else(|| caps.get(2)).expect("one alternative matched");
        parts.push(TemplatePart::Group(digits.as_str().parse().unwrap_or(usize::MAX)));
        last = whole.end();
    }
    if last < template.len() {
        parts.push(TemplatePart::Literal(template[last..].to_string()));
    }
    parts
}

/// Moves every file under `root` whose path matches `file_filter` to the
/// root-relative path obtained by substituting its captures into `template`,
/// then scans the result. Nothing is moved if any destination collides.
pub fn make_project(root: &Path, file_filter: &str, template: &str) -> Result<CorpusProject, PipelineError> {
    let re = full_match(file_filter)?;
    let available = re.captures_len() - 1;
    let parts = parse_template(template);
    for part in &parts {
        if let TemplatePart::Group(g) = *part {
            if g == 0 || g > available {
                return Err(PipelineError::TemplateGroupOutOfRange { group: g, available });
            }
        }
    }
    if !root.is_dir() {
        return Err(PipelineError::Io {
            path: root.display().to_string(),
            message: "not a directory".to_string(),
        });
    }

    let mut moves: BTreeMap<PathBuf, Vec<PathBuf>> = BTreeMap::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| PipelineError::Io {
            path: root.display().to_string(),
            message: e.to_string(),
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let source = entry.into_path();
        let text = path_text(&source);
        let Some(caps) = re.captures(&text) else {
            continue;
        };
        let mut relative = String::new();
        for part in &parts {
            match part {
                TemplatePart::Literal(s) => relative.push_str(s),
                TemplatePart::Group(g) => relative.push_str(caps.get(*g).map_or("", |m| m.as_str())),
            }
        }
        let destination = root.join(relative.trim_start_matches('/'));
        if destination != source {
            moves.entry(destination).or_default().push(source);
        }
    }

    let sources: HashSet<&PathBuf> = moves.values().flatten().collect();
    for (destination, from) in &moves {
        let occupied = destination.exists() && !sources.contains(destination);
        if from.len() > 1 || occupied {
            let mut names: Vec<String> = from.iter().map(|p| path_text(p)).collect();
            if occupied {
                names.push(format!("{} (existing)", path_text(destination)));
            }
            return Err(PipelineError::DestinationCollision {
                destination: path_text(destination),
                sources: names,
            });
        }
    }

    // Two-phase rename through temporary names in the root.
    let mut staged = Vec::with_capacity(moves.len());
    for (n, (destination, from)) in moves.into_iter().enumerate() {
        let source = &from[0];
        let tmp = root.join(format!(".figdata-move-{n}"));
        fs::rename(source, &tmp).map_err(|e| PipelineError::io(source, e))?;
        staged.push((tmp, destination));
    }
    for (tmp, destination) in staged {
        if let Some(parent) = destination.parent() {
            fs::create_dir_all(parent).map_err(|e| PipelineError::io(parent, e))?;
        }
        fs::rename(&tmp, &destination).map_err(|e| PipelineError::io(&destination, e))?;
    }
    CorpusProject::scan(root)
}

/// Lists the figure files of `project` whose full path matches
/// `figure_filter`. The first capture group must hold the figure index.
pub fn enumerate_figures(project: &CorpusProject, figure_filter: &str) -> Result<Vec<FigureRef>, PipelineError> {
    let re = full_match(figure_filter)?;
    if re.captures_len() < 2 {
        return Err(PipelineError::BadFilter(format!(
            "`{figure_filter}` has no capture group for the figure index"
        )));
    }
    let mut out = Vec::new();
    for tree in &project.trees {
        let tree_dir = project.root.join(&tree.id);
        for entry in WalkDir::new(&tree_dir).sort_by_file_name() {
            let entry = entry.map_err(|e| PipelineError::Io {
                path: tree_dir.display().to_string(),
                message: e.to_string(),
            })?;
            if !entry.file_type().is_file() {
                continue;
            }
            let path = entry.into_path();
            let text = path_text(&path);
            let Some(caps) = re.captures(&text) else {
                continue;
            };
            let raw = caps.get(1).map_or("", |m| m.as_str());
            let index = raw.parse::<u32>().map_err(|_| {
                PipelineError::BadFilter(format!("first capture group `{raw}` of {text} is not a figure index"))
            })?;
            let relative_path = path.strip_prefix(&project.root).unwrap_or(&path).to_path_buf();
            out.push(FigureRef {
                tree_id: tree.id.clone(),
                index,
                svg_path: path,
                relative_path,
            });
        }
    }
    out.sort_by(|a, b| (&a.tree_id, a.index, &a.relative_path).cmp(&(&b.tree_id, b.index, &b.relative_path)));
    Ok(out)
}

/// Output locations for a figure, mirroring its position under `output_root`.
/// `figure.svg` yields `figure.csv`, `figure_annotated.svg` and `report.json`;
/// any other stem `S` yields `S.csv`, `S_annotated.svg` and `S_report.json`.
pub fn output_paths(figure: &FigureRef, output_root: &Path) -> OutputPaths {
    let target = output_root.join(&figure.relative_path);
    let dir = target.parent().map(Path::to_path_buf).unwrap_or_default();
    let stem = target
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "figure".to_string());
    let report = if stem == "figure" {
        "report.json".to_string()
    } else {
        format!("{stem}_report.json")
    };
    OutputPaths {
        csv: dir.join(format!("{stem}.csv")),
        annotated_svg: dir.join(format!("{stem}_annotated.svg")),
        report: dir.join(report),
    }
}
