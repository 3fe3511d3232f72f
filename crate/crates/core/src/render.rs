//! DOT and Mermaid diagrams generated from the same values that execute.
//!
//! Node identifiers are `<leaf>__<vertex>`. Implicit identity transitions are
//! never drawn; only explicit topology edges are. Output is a pure function of
//! the input structure, so rendering the same value twice gives the same bytes.

use std::collections::HashSet;
use std::fmt::Write as _;

use strum::{Display, EnumString};

use crate::compose::{LeafInfo, StateMachine, Structure};
use crate::error::BuildError;
use crate::machine::BaseMachine;
use crate::topology::VertexId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Display, EnumString)]
#[strum(serialize_all = "lowercase")]
pub enum Format {
    Dot,
    Mermaid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub format: Format,
    pub text: String,
}

const INDENT: &str = "    ";

pub fn render_base<S, I, O>(machine: &BaseMachine<S, I, O>, format: Format) -> Diagram {
    let leaf = LeafInfo {
        name: machine.name().to_owned(),
        topology: machine.shared_topology(),
        initial: machine.initial_vertex().clone(),
        current: machine.state().vertex.clone(),
    };
    render_leaf(&leaf, format)
}

/// Topology of a single leaf: one node per vertex, one edge per explicit
/// transition, plus a marker pointing at the initial vertex.
pub fn render_leaf(leaf: &LeafInfo, format: Format) -> Diagram {
    let mut text = String::new();
    match format {
        Format::Dot => {
            let _ = writeln!(text, "digraph {} {{", dot_id(&leaf.name));
            dot_leaf_body(&mut text, leaf, 1);
            text.push_str("}\n");
        }
        Format::Mermaid => {
            text.push_str("stateDiagram-v2\n");
            for v in leaf.topology.vertex_set() {
                let _ = writeln!(
                    text,
                    "{INDENT}state \"{}\" as {}",
                    mermaid_label(v.as_str()),
                    mermaid_id(&node_id(&leaf.name, &v))
                );
            }
            let _ = writeln!(
                text,
                "{INDENT}[*] --> {}",
                mermaid_id(&node_id(&leaf.name, &leaf.initial))
            );
            for (from, to) in leaf.topology.edge_pairs() {
                let _ = writeln!(
                    text,
                    "{INDENT}{} --> {}",
                    mermaid_id(&node_id(&leaf.name, from)),
                    mermaid_id(&node_id(&leaf.name, to))
                );
            }
        }
    }
    Diagram { format, text }
}

/// Architecture of a composed machine: one cluster per leaf, with edges for
/// the wiring between them.
pub fn render_flow<I, O>(machine: &StateMachine<I, O>, format: Format) -> Result<Diagram, BuildError> {
    render_structure(&machine.structure(), format)
}

pub fn render_structure(structure: &Structure, format: Format) -> Result<Diagram, BuildError> {
    let mut seen = HashSet::new();
    for leaf in structure.leaves() {
        if !seen.insert(leaf.name.as_str()) {
            return Err(BuildError::DuplicateLeafName {
                name: leaf.name.clone(),
            });
        }
    }

    let mut flow = Flow {
        format,
        body: String::new(),
        links: Vec::new(),
        brackets: 0,
    };
    flow.walk(structure, 1);

    let mut text = String::new();
    match format {
        Format::Dot => {
            text.push_str("digraph {\n");
            let _ = writeln!(text, "{INDENT}compound=true;");
            text.push_str(&flow.body);
            for link in &flow.links {
                let _ = writeln!(
                    text,
                    "{INDENT}{} -> {} [ltail={}, lhead={}, label={}];",
                    dot_id(&link.from.node),
                    dot_id(&link.to.node),
                    dot_id(&link.from.cluster),
                    dot_id(&link.to.cluster),
                    dot_id(link.label)
                );
            }
            text.push_str("}\n");
        }
        Format::Mermaid => {
            text.push_str("flowchart TD\n");
            text.push_str(&flow.body);
            for link in &flow.links {
                let _ = writeln!(
                    text,
                    "{INDENT}{} -->|{}| {}",
                    link.from.cluster, link.label, link.to.cluster
                );
            }
        }
    }
    Ok(Diagram { format, text })
}

fn node_id(leaf: &str, vertex: &VertexId) -> String {
    format!("{leaf}__{vertex}")
}

fn dot_id(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len() + 2);
    out.push('"');
    for c in raw.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn mermaid_id(raw: &str) -> String {
    raw.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect()
}

fn mermaid_label(raw: &str) -> String {
    raw.replace('"', "#quot;")
}

fn pad(level: usize) -> String {
    INDENT.repeat(level)
}

fn dot_leaf_body(out: &mut String, leaf: &LeafInfo, level: usize) {
    let pad = pad(level);
    let start = format!("{}__[*]", leaf.name);
    let _ = writeln!(out, "{pad}{} [shape=point];", dot_id(&start));
    for v in leaf.topology.vertex_set() {
        let _ = writeln!(
            out,
            "{pad}{} [label={}];",
            dot_id(&node_id(&leaf.name, &v)),
            dot_id(v.as_str())
        );
    }
    let _ = writeln!(
        out,
        "{pad}{} -> {};",
        dot_id(&start),
        dot_id(&node_id(&leaf.name, &leaf.initial))
    );
    for (from, to) in leaf.topology.edge_pairs() {
        let _ = writeln!(
            out,
            "{pad}{} -> {};",
            dot_id(&node_id(&leaf.name, from)),
            dot_id(&node_id(&leaf.name, to))
        );
    }
}

fn mermaid_leaf_body(out: &mut String, leaf: &LeafInfo, level: usize) {
    let pad = pad(level);
    let start = mermaid_id(&format!("{}__start", leaf.name));
    let _ = writeln!(out, "{pad}{start}((\" \"))");
    for v in leaf.topology.vertex_set() {
        let _ = writeln!(
            out,
            "{pad}{}[\"{}\"]",
            mermaid_id(&node_id(&leaf.name, &v)),
            mermaid_label(v.as_str())
        );
    }
    let _ = writeln!(
        out,
        "{pad}{start} --> {}",
        mermaid_id(&node_id(&leaf.name, &leaf.initial))
    );
    for (from, to) in leaf.topology.edge_pairs() {
        let _ = writeln!(
            out,
            "{pad}{} --> {}",
            mermaid_id(&node_id(&leaf.name, from)),
            mermaid_id(&node_id(&leaf.name, to))
        );
    }
}

/// Where edges attach to a rendered subtree.
#[derive(Debug, Clone)]
struct Port {
    cluster: String,
    node: String,
}

struct Ports {
    entry: Port,
    exit: Port,
}

struct Link {
    from: Port,
    to: Port,
    label: &'static str,
}

struct Flow {
    format: Format,
    body: String,
    links: Vec<Link>,
    brackets: usize,
}

impl Flow {
    fn walk(&mut self, structure: &Structure, level: usize) -> Ports {
        match structure {
            Structure::Basic(leaf) => {
                let port = self.leaf(leaf, level);
                Ports {
                    entry: port.clone(),
                    exit: port,
                }
            }
            Structure::Sequential(a, b) => self.chain(a, b, "seq", level),
            Structure::Kleisli(a, b) => self.chain(a, b, "kleisli", level),
            Structure::Feedback(forward, backward) => {
                let f = self.walk(forward, level);
                let g = self.walk(backward, level);
                self.links.push(Link {
                    from: f.exit.clone(),
                    to: g.entry,
                    label: "feedback",
                });
                self.links.push(Link {
                    from: g.exit,
                    to: f.entry.clone(),
                    label: "feedback",
                });
                f
            }
            Structure::Parallel(a, b) => self.bracket("parallel", a, b, level),
            Structure::Alternative(a, b) => self.bracket("alternative", a, b, level),
        }
    }

    fn chain(&mut self, a: &Structure, b: &Structure, label: &'static str, level: usize) -> Ports {
        let first = self.walk(a, level);
        let second = self.walk(b, level);
        self.links.push(Link {
            from: first.exit,
            to: second.entry.clone(),
            label,
        });
        Ports {
            entry: first.entry,
            exit: second.exit,
        }
    }

    fn leaf(&mut self, leaf: &LeafInfo, level: usize) -> Port {
        let pad = pad(level);
        let first_vertex = leaf
            .topology
            .vertex_set()
            .into_iter()
            .next()
            .unwrap_or_else(|| leaf.initial.clone());
        match self.format {
            Format::Dot => {
                let cluster = format!("cluster_leaf_{}", leaf.name);
                let _ = writeln!(self.body, "{pad}subgraph {} {{", dot_id(&cluster));
                let _ = writeln!(self.body, "{pad}{INDENT}label={};", dot_id(&leaf.name));
                dot_leaf_body(&mut self.body, leaf, level + 1);
                let _ = writeln!(self.body, "{pad}}}");
                Port {
                    cluster,
                    node: node_id(&leaf.name, &first_vertex),
                }
            }
            Format::Mermaid => {
                let cluster = mermaid_id(&format!("leaf_{}", leaf.name));
                let _ = writeln!(
                    self.body,
                    "{pad}subgraph {cluster}[\"{}\"]",
                    mermaid_label(&leaf.name)
                );
                mermaid_leaf_body(&mut self.body, leaf, level + 1);
                let _ = writeln!(self.body, "{pad}end");
                Port {
                    cluster,
                    node: mermaid_id(&node_id(&leaf.name, &first_vertex)),
                }
            }
        }
    }

    fn bracket(&mut self, kind: &str, a: &Structure, b: &Structure, level: usize) -> Ports {
        let pad = pad(level);
        let index = self.brackets;
        self.brackets += 1;
        let cluster = match self.format {
            Format::Dot => {
                let cluster = format!("cluster_{kind}_{index}");
                let _ = writeln!(self.body, "{pad}subgraph {} {{", dot_id(&cluster));
                let _ = writeln!(self.body, "{pad}{INDENT}label={};", dot_id(kind));
                cluster
            }
            Format::Mermaid => {
                let cluster = format!("{kind}_{index}");
                let _ = writeln!(self.body, "{pad}subgraph {cluster}[\"{kind}\"]");
                cluster
            }
        };
        let first = self.walk(a, level + 1);
        self.walk(b, level + 1);
        match self.format {
            Format::Dot => {
                let _ = writeln!(self.body, "{pad}}}");
            }
            Format::Mermaid => {
                let _ = writeln!(self.body, "{pad}end");
            }
        }
        let port = Port {
            cluster,
            node: first.entry.node,
        };
        Ports {
            entry: port.clone(),
            exit: port,
        }
    }
}
