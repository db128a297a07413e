//! The label file format: one `ID FORM LABEL DEPREL` row per token,
//! sentences separated by blank lines. An optional row with ID 0 carries the
//! root's label. Empty labels and missing relations are written `_`.

use std::fmt::Write as _;
use std::io::BufRead;

use anyhow::{bail, Context, Result};
use hierbrack::brackets::parse_label;
use hierbrack::{Label, LabelSequence};

const EMPTY: &str = "_";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledSentence {
    pub forms: Vec<String>,
    pub labels: LabelSequence,
}

fn field(label: &Label) -> String {
    if label.is_empty() {
        EMPTY.to_owned()
    } else {
        label.to_string()
    }
}

/// The rows of one sentence, blank separator line included.
pub fn render(sentence: &LabeledSentence) -> String {
    let mut out = String::new();
    if let Some(root) = &sentence.labels.root {
        let _ = writeln!(out, "0\t{EMPTY}\t{}\t{EMPTY}", field(root));
    }
    for (k, form) in sentence.forms.iter().enumerate() {
        let deprel = sentence.labels.deprels[k].as_deref().unwrap_or(EMPTY);
        let _ = writeln!(
            out,
            "{}\t{form}\t{}\t{deprel}",
            k + 1,
            field(&sentence.labels.labels[k])
        );
    }
    out.push('\n');
    out
}

pub fn read<R: BufRead>(reader: R) -> Result<Vec<LabeledSentence>> {
    let mut sentences = Vec::new();
    let mut current = Pending::default();
    for (lineno, line) in reader.lines().enumerate() {
        let lineno = lineno + 1;
        let line = line.with_context(|| format!("line {lineno}"))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            sentences.extend(current.finish());
            continue;
        }
        current
            .push(line)
            .with_context(|| format!("line {lineno}"))?;
    }
    sentences.extend(current.finish());
    Ok(sentences)
}

#[derive(Default)]
struct Pending {
    root: Option<Label>,
    forms: Vec<String>,
    labels: Vec<Label>,
    deprels: Vec<Option<String>>,
}

impl Pending {
    fn push(&mut self, line: &str) -> Result<()> {
        let fields: Vec<&str> = line.split('\t').collect();
        let [id, form, label, deprel] = fields[..] else {
            bail!("expected 4 tab-separated columns, found {}", fields.len());
        };
        let id: usize = id.parse().with_context(|| format!("invalid ID {id:?}"))?;
        let label = if label == EMPTY {
            Label::default()
        } else {
            parse_label(label).with_context(|| format!("invalid label {label:?}"))?
        };
        if id == 0 {
            if self.root.is_some() || !self.forms.is_empty() {
                bail!("the root row must come first");
            }
            self.root = Some(label);
            return Ok(());
        }
        if id != self.forms.len() + 1 {
            bail!("expected ID {}, found {id}", self.forms.len() + 1);
        }
        self.forms.push(form.to_owned());
        self.labels.push(label);
        self.deprels
            .push((deprel != EMPTY).then(|| deprel.to_owned()));
        Ok(())
    }

    fn finish(&mut self) -> Option<LabeledSentence> {
        let Pending {
            root,
            forms,
            labels,
            deprels,
        } = std::mem::take(self);
        if forms.is_empty() && root.is_none() {
            return None;
        }
        Some(LabeledSentence {
            forms,
            labels: LabelSequence {
                root,
                labels,
                deprels,
            },
        })
    }
}
