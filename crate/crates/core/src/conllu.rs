//! CoNLL-U reading and writing.
//!
//! Only the HEAD and DEPREL columns feed the dependency graph. Comments,
//! multiword token ranges and empty nodes are carried through verbatim so a
//! file can be rewritten with new heads without losing anything else.

use std::io::{BufRead, Write};

use crate::deptree::{Arc, DepGraph};
use crate::error::{Error, Result};

/// Token columns other than ID, HEAD and DEPREL.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub form: String,
    pub lemma: String,
    pub upos: String,
    pub xpos: String,
    pub feats: String,
    pub deps: String,
    pub misc: String,
}

impl Token {
    pub fn with_form(form: impl Into<String>) -> Self {
        Token {
            form: form.into(),
            lemma: "_".into(),
            upos: "_".into(),
            xpos: "_".into(),
            feats: "_".into(),
            deps: "_".into(),
            misc: "_".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Line {
    Comment(String),
    /// Multiword range or empty node, kept as read.
    Verbatim(String),
    Token(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    lines: Vec<Line>,
    tokens: Vec<Token>,
    graph: DepGraph,
}

impl Sentence {
    /// A sentence with bare token rows and the given graph.
    pub fn new(tokens: Vec<Token>, graph: DepGraph) -> Self {
        assert_eq!(tokens.len(), graph.n(), "one token per graph node");
        Sentence {
            lines: (0..tokens.len()).map(Line::Token).collect(),
            tokens,
            graph,
        }
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn forms(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.form.as_str())
    }

    pub fn graph(&self) -> &DepGraph {
        &self.graph
    }

    pub fn into_graph(self) -> DepGraph {
        self.graph
    }

    pub fn set_graph(&mut self, graph: DepGraph) {
        assert_eq!(graph.n(), self.tokens.len(), "graph size must not change");
        self.graph = graph;
    }

    pub fn comments(&self) -> impl Iterator<Item = &str> {
        self.lines.iter().filter_map(|line| match line {
            Line::Comment(text) => Some(text.as_str()),
            _ => None,
        })
    }

    /// The `sent_id` comment value, if present.
    pub fn sent_id(&self) -> Option<&str> {
        self.comments()
            .find_map(|c| {
                c.strip_prefix("# sent_id = ")
                    .or_else(|| c.strip_prefix("# sent_id="))
            })
            .map(str::trim)
    }
}

/// Reads every sentence of a CoNLL-U stream.
pub fn read_conllu<R: BufRead>(reader: R) -> Result<Vec<Sentence>> {
    let mut sentences = Vec::new();
    let mut pending = Pending::default();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            if let Some(sentence) = pending.finish(sentences.len() + 1)? {
                sentences.push(sentence);
            }
            continue;
        }
        if line.starts_with('#') {
            pending.lines.push(Line::Comment(line.to_owned()));
            continue;
        }
        pending.push_row(line, lineno)?;
    }
    if let Some(sentence) = pending.finish(sentences.len() + 1)? {
        sentences.push(sentence);
    }
    Ok(sentences)
}

pub fn write_conllu<'a, W, I>(mut writer: W, sentences: I) -> Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a Sentence>,
{
    for sentence in sentences {
        write_sentence(&mut writer, sentence)?;
    }
    Ok(())
}

pub fn write_sentence<W: Write>(mut writer: W, sentence: &Sentence) -> Result<()> {
    let graph = &sentence.graph;
    for line in &sentence.lines {
        match line {
            Line::Comment(text) | Line::Verbatim(text) => writeln!(writer, "{text}")?,
            Line::Token(index) => {
                let id = index + 1;
                let token = &sentence.tokens[*index];
                let head = graph
                    .head(id)
                    .map_or_else(|| "_".to_owned(), |h| h.to_string());
                let deprel = graph.deprel_of(id).unwrap_or("_");
                writeln!(
                    writer,
                    "{id}\t{}\t{}\t{}\t{}\t{}\t{head}\t{deprel}\t{}\t{}",
                    token.form,
                    token.lemma,
                    token.upos,
                    token.xpos,
                    token.feats,
                    token.deps,
                    token.misc
                )?;
            }
        }
    }
    writeln!(writer)?;
    Ok(())
}

#[derive(Default)]
struct Pending {
    lines: Vec<Line>,
    tokens: Vec<Token>,
    heads: Vec<(Option<usize>, String, usize)>,
}

impl Pending {
    fn push_row(&mut self, line: &str, lineno: usize) -> Result<()> {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 10 {
            return Err(Error::Conllu {
                line: lineno,
                message: format!("expected 10 tab-separated columns, found {}", fields.len()),
            });
        }
        let id = fields[0];
        if id.contains('-') || id.contains('.') {
            self.lines.push(Line::Verbatim(line.to_owned()));
            return Ok(());
        }
        let id: usize = id.parse().map_err(|_| Error::Conllu {
            line: lineno,
            message: format!("invalid token id {id:?}"),
        })?;
        if id != self.tokens.len() + 1 {
            return Err(Error::Conllu {
                line: lineno,
                message: format!("expected token id {}, found {id}", self.tokens.len() + 1),
            });
        }
        let head = match fields[6] {
            "_" => None,
            text => Some(text.parse::<usize>().map_err(|_| Error::Conllu {
                line: lineno,
                message: format!("invalid head {text:?}"),
            })?),
        };
        self.heads.push((head, fields[7].to_owned(), lineno));
        self.lines.push(Line::Token(self.tokens.len()));
        self.tokens.push(Token {
            form: fields[1].to_owned(),
            lemma: fields[2].to_owned(),
            upos: fields[3].to_owned(),
            xpos: fields[4].to_owned(),
            feats: fields[5].to_owned(),
            deps: fields[8].to_owned(),
            misc: fields[9].to_owned(),
        });
        Ok(())
    }

    fn finish(&mut self, number: usize) -> Result<Option<Sentence>> {
        let Pending {
            lines,
            tokens,
            heads,
        } = std::mem::take(self);
        if tokens.is_empty() && lines.is_empty() {
            return Ok(None);
        }
        let mut graph = DepGraph::new(tokens.len());
        let name = || {
            lines
                .iter()
                .find_map(|l| match l {
                    Line::Comment(c) => c.strip_prefix("# sent_id = ").map(str::to_owned),
                    _ => None,
                })
                .unwrap_or_else(|| format!("#{number}"))
        };
        for (i, (head, deprel, lineno)) in heads.into_iter().enumerate() {
            let Some(head) = head else { continue };
            let dep = i + 1;
            if head > tokens.len() || head == dep {
                return Err(Error::Structure {
                    sentence: name(),
                    message: format!("line {lineno}: head {head} of token {dep} is out of range"),
                });
            }
            let arc = Arc::new(head, dep);
            graph.add_arc(arc)?;
            if deprel != "_" {
                graph.set_deprel(&arc, deprel);
            }
        }
        Ok(Some(Sentence {
            lines,
            tokens,
            graph,
        }))
    }
}
