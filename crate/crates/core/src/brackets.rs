//! Bracket symbols, labels and their plain-text form.
//!
//! A symbol is one of four shapes (`/`, `>`, `<`, `\`) at one of two
//! strengths. Superbrackets are written with a `*` suffix and a non-zero
//! index follows in decimal: `>*2`, `<1`, `\*`. A label is a concatenation
//! of symbols with no separator.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shape {
    /// `/`: opens a rightward arc.
    OpenRight,
    /// `>`: closes a rightward arc.
    CloseRight,
    /// `<`: opens a leftward arc.
    OpenLeft,
    /// `\`: closes a leftward arc.
    CloseLeft,
}

impl Shape {
    pub fn as_char(self) -> char {
        match self {
            Shape::OpenRight => '/',
            Shape::CloseRight => '>',
            Shape::OpenLeft => '<',
            Shape::CloseLeft => '\\',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '/' => Some(Shape::OpenRight),
            '>' => Some(Shape::CloseRight),
            '<' => Some(Shape::OpenLeft),
            '\\' => Some(Shape::CloseLeft),
            _ => None,
        }
    }

    pub fn is_opening(self) -> bool {
        matches!(self, Shape::OpenRight | Shape::OpenLeft)
    }

    pub fn is_closing(self) -> bool {
        !self.is_opening()
    }

    /// Whether the arc this shape belongs to points rightward.
    pub fn is_rightward(self) -> bool {
        matches!(self, Shape::OpenRight | Shape::CloseRight)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strength {
    Super,
    Semi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BracketSymbol {
    pub shape: Shape,
    pub strength: Strength,
    pub index: u32,
}

impl BracketSymbol {
    pub const fn new(shape: Shape, strength: Strength) -> Self {
        BracketSymbol {
            shape,
            strength,
            index: 0,
        }
    }

    pub const fn sup(shape: Shape) -> Self {
        Self::new(shape, Strength::Super)
    }

    pub const fn semi(shape: Shape) -> Self {
        Self::new(shape, Strength::Semi)
    }

    pub fn with_index(mut self, index: u32) -> Self {
        self.index = index;
        self
    }

    pub fn is_super(&self) -> bool {
        self.strength == Strength::Super
    }

    pub fn is_opening(&self) -> bool {
        self.shape.is_opening()
    }

    pub fn is_closing(&self) -> bool {
        self.shape.is_closing()
    }
}

impl fmt::Display for BracketSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.shape.as_char())?;
        if self.is_super() {
            f.write_str("*")?;
        }
        if self.index > 0 {
            write!(f, "{}", self.index)?;
        }
        Ok(())
    }
}

/// The bracket symbols attached to one node.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub Vec<BracketSymbol>);

impl Label {
    pub fn new(symbols: Vec<BracketSymbol>) -> Self {
        Label(symbols)
    }

    pub fn symbols(&self) -> &[BracketSymbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_index(&self) -> u32 {
        self.0.iter().map(|s| s.index).max().unwrap_or(0)
    }

    /// Whether the label fits `(\*)? (> | >* | < | <*) (/*)?`, the only
    /// shape a compact encoding of a projective tree can produce.
    pub fn is_projective_form(&self) -> bool {
        let mut rest = self.0.as_slice();
        if rest.iter().any(|s| s.index != 0) {
            return false;
        }
        if let Some((first, tail)) = rest.split_first() {
            if *first == CLOSE_LEFT_SUPER {
                rest = tail;
            }
        }
        if let Some((last, init)) = rest.split_last() {
            if *last == OPEN_RIGHT_SUPER {
                rest = init;
            }
        }
        matches!(rest, [s] if matches!(s.shape, Shape::CloseRight | Shape::OpenLeft))
    }
}

pub const OPEN_RIGHT_SUPER: BracketSymbol = BracketSymbol::sup(Shape::OpenRight);
pub const CLOSE_RIGHT_SUPER: BracketSymbol = BracketSymbol::sup(Shape::CloseRight);
pub const OPEN_LEFT_SUPER: BracketSymbol = BracketSymbol::sup(Shape::OpenLeft);
pub const CLOSE_LEFT_SUPER: BracketSymbol = BracketSymbol::sup(Shape::CloseLeft);
pub const OPEN_RIGHT_SEMI: BracketSymbol = BracketSymbol::semi(Shape::OpenRight);
pub const CLOSE_RIGHT_SEMI: BracketSymbol = BracketSymbol::semi(Shape::CloseRight);
pub const OPEN_LEFT_SEMI: BracketSymbol = BracketSymbol::semi(Shape::OpenLeft);
pub const CLOSE_LEFT_SEMI: BracketSymbol = BracketSymbol::semi(Shape::CloseLeft);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for symbol in &self.0 {
            write!(f, "{symbol}")?;
        }
        Ok(())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        parse_label(text)
    }
}

/// Parses the concatenated token form; the empty string is the empty label.
pub fn parse_label(text: &str) -> Result<Label> {
    let bytes = text.as_bytes();
    let mut symbols = Vec::new();
    let mut at = 0;
    while at < bytes.len() {
        let c = bytes[at] as char;
        let Some(shape) = Shape::from_char(c) else {
            let message = if c.is_ascii_digit() {
                "index digits without a preceding bracket".to_owned()
            } else {
                let c = text[at..].chars().next().unwrap_or(c);
                format!("unexpected character {c:?}")
            };
            return Err(Error::LabelParse {
                offset: at,
                message,
            });
        };
        at += 1;
        let strength = if bytes.get(at) == Some(&b'*') {
            at += 1;
            Strength::Super
        } else {
            Strength::Semi
        };
        let digits_start = at;
        while at < bytes.len() && bytes[at].is_ascii_digit() {
            at += 1;
        }
        let index = if at > digits_start {
            text[digits_start..at]
                .parse::<u32>()
                .map_err(|e| Error::LabelParse {
                    offset: digits_start,
                    message: e.to_string(),
                })?
        } else {
            0
        };
        symbols.push(BracketSymbol {
            shape,
            strength,
            index,
        });
    }
    Ok(Label(symbols))
}

pub fn render_label(label: &Label) -> String {
    label.to_string()
}

/// Orders the symbols of one label: closing symbols first by increasing arc
/// length, then opening symbols by decreasing arc length. Equal lengths put
/// `\` before `>` among closers, `<` before `/` among openers, closing
/// semibrackets before closing superbrackets and opening superbrackets
/// before opening semibrackets.
///
/// Each symbol carries the length of the arc it encodes; the lengths are
/// dropped from the result.
pub fn canonicalize(mut annotated: Vec<(BracketSymbol, usize)>) -> Label {
    annotated.sort_by_key(|&(symbol, len)| order_key(symbol, len));
    Label(annotated.into_iter().map(|(symbol, _)| symbol).collect())
}

/// Sort key behind [`canonicalize`] for a symbol encoding an arc of length
/// `len`.
pub fn order_key(symbol: BracketSymbol, len: usize) -> (u8, isize, u8, u8) {
    let leftward_first = if symbol.shape.is_rightward() { 1 } else { 0 };
    if symbol.is_closing() {
        let semi_first = if symbol.is_super() { 1 } else { 0 };
        (0, len as isize, semi_first, leftward_first)
    } else {
        let super_first = if symbol.is_super() { 0 } else { 1 };
        (1, -(len as isize), super_first, leftward_first)
    }
}

/// The four flags of the 4-bit encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FourBitLabel {
    /// The node is a right dependent (its head is to the left).
    pub b0: bool,
    /// The node is the farthest dependent of its head on that side.
    pub b1: bool,
    /// The node has left dependents.
    pub b2: bool,
    /// The node has right dependents.
    pub b3: bool,
}

impl FourBitLabel {
    pub fn from_bits(bits: u8) -> Self {
        FourBitLabel {
            b0: bits & 0b1000 != 0,
            b1: bits & 0b0100 != 0,
            b2: bits & 0b0010 != 0,
            b3: bits & 0b0001 != 0,
        }
    }

    pub fn bits(&self) -> u8 {
        (self.b0 as u8) << 3 | (self.b1 as u8) << 2 | (self.b2 as u8) << 1 | self.b3 as u8
    }

    pub fn all() -> impl Iterator<Item = FourBitLabel> {
        (0..16u8).map(FourBitLabel::from_bits)
    }
}

impl fmt::Display for FourBitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04b}", self.bits())
    }
}

pub fn fourbit_to_label(bits: FourBitLabel) -> Label {
    let mut symbols = Vec::with_capacity(3);
    if bits.b2 {
        symbols.push(CLOSE_LEFT_SUPER);
    }
    let shape = if bits.b0 {
        Shape::CloseRight
    } else {
        Shape::OpenLeft
    };
    let strength = if bits.b1 {
        Strength::Super
    } else {
        Strength::Semi
    };
    symbols.push(BracketSymbol::new(shape, strength));
    if bits.b3 {
        symbols.push(OPEN_RIGHT_SUPER);
    }
    Label(symbols)
}

pub fn label_to_fourbit(label: &Label) -> Result<FourBitLabel> {
    let not_fourbit = || Error::NotFourBit(label.to_string());
    if !label.is_projective_form() {
        return Err(not_fourbit());
    }
    let symbols = label.symbols();
    let b2 = symbols.first() == Some(&CLOSE_LEFT_SUPER);
    let b3 = symbols.last() == Some(&OPEN_RIGHT_SUPER);
    let core = symbols[b2 as usize];
    Ok(FourBitLabel {
        b0: core.shape == Shape::CloseRight,
        b1: core.is_super(),
        b2,
        b3,
    })
}

/// The four labels of the 16-label projective alphabet that the proper
/// rope cover never produces.
pub fn forbidden_optimal_labels() -> [Label; 4] {
    [
        Label(vec![OPEN_LEFT_SUPER, OPEN_RIGHT_SUPER]),
        Label(vec![CLOSE_LEFT_SUPER, CLOSE_RIGHT_SUPER]),
        Label(vec![CLOSE_LEFT_SUPER, OPEN_LEFT_SUPER, OPEN_RIGHT_SUPER]),
        Label(vec![CLOSE_LEFT_SUPER, CLOSE_RIGHT_SUPER, OPEN_RIGHT_SUPER]),
    ]
}
