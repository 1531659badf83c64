//! Z2-valued parities of crossings.

use std::fmt;

use thiserror::Error;

use crate::biquandle::{crossing_inputs, enumerate_colorings, Biquandle};
use crate::gauss::{apply_move, interlacement, LinkDiagram, MoveDescriptor, MoveError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParityError {
    #[error("{selector} parity needs {expected} component(s), diagram has {found}")]
    ComponentCount {
        selector: &'static str,
        expected: usize,
        found: usize,
    },
    #[error(transparent)]
    Move(#[from] MoveError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParitySelector {
    /// Number of linked chords mod 2.
    Gaussian,
    /// Odd iff the two passages lie on different components.
    Component,
    /// Read off the flip-biquandle coloring.
    Biquandle,
    /// Every crossing even.
    Zero,
}

impl ParitySelector {
    pub fn name(self) -> &'static str {
        match self {
            ParitySelector::Gaussian => "gaussian",
            ParitySelector::Component => "component",
            ParitySelector::Biquandle => "biquandle",
            ParitySelector::Zero => "zero",
        }
    }
}

/// Parity bit of every crossing, indexed by crossing index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParityAssignment {
    pub bits: Vec<u8>,
}

impl ParityAssignment {
    pub fn get(&self, crossing: usize) -> u8 {
        self.bits[crossing]
    }

    /// `(label, bit)` pairs in label order.
    pub fn labelled(&self, d: &LinkDiagram) -> Vec<(String, u8)> {
        d.sorted_crossings()
            .into_iter()
            .map(|i| (d.label(i).to_string(), self.bits[i]))
            .collect()
    }

    pub fn display<'a>(&'a self, d: &'a LinkDiagram) -> impl fmt::Display + 'a {
        struct Show<'a>(&'a ParityAssignment, &'a LinkDiagram);
        impl fmt::Display for Show<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let parts: Vec<String> = self
                    .0
                    .labelled(self.1)
                    .into_iter()
                    .map(|(l, b)| format!("{l}:{b}"))
                    .collect();
                write!(f, "{}", parts.join(" "))
            }
        }
        Show(self, d)
    }
}

pub fn gaussian_parity(d: &LinkDiagram) -> ParityAssignment {
    let m = interlacement(d);
    ParityAssignment {
        bits: m
            .iter()
            .map(|row| (row.iter().map(|&v| v as usize).sum::<usize>() % 2) as u8)
            .collect(),
    }
}

pub fn component_parity(d: &LinkDiagram) -> Result<ParityAssignment, ParityError> {
    if d.num_components() != 2 {
        return Err(ParityError::ComponentCount {
            selector: "component",
            expected: 2,
            found: d.num_components(),
        });
    }
    Ok(ParityAssignment {
        bits: d
            .positions()
            .iter()
            .map(|[o, u]| u8::from(o.component != u.component))
            .collect(),
    })
}

/// A crossing is even iff its two input colors agree under a flip-biquandle
/// coloring.
pub fn biquandle_parity(d: &LinkDiagram) -> Result<ParityAssignment, ParityError> {
    if d.num_components() != 1 {
        return Err(ParityError::ComponentCount {
            selector: "biquandle",
            expected: 1,
            found: d.num_components(),
        });
    }
    let flip = Biquandle::flip();
    let cols = enumerate_colorings(d, &flip);
    let f = &cols[0];
    let arcs = d.crossing_arcs();
    Ok(ParityAssignment {
        bits: arcs
            .iter()
            .enumerate()
            .map(|(v, a)| {
                let (x, y) = crossing_inputs(a, d.sign(v), f);
                u8::from(x != y)
            })
            .collect(),
    })
}

pub fn parity(d: &LinkDiagram, sel: ParitySelector) -> Result<ParityAssignment, ParityError> {
    match sel {
        ParitySelector::Gaussian => Ok(gaussian_parity(d)),
        ParitySelector::Component => component_parity(d),
        ParitySelector::Biquandle => biquandle_parity(d),
        ParitySelector::Zero => Ok(ParityAssignment {
            bits: vec![0; d.num_crossings()],
        }),
    }
}

/// Checks the parity axioms across one move: unchanged bits on surviving
/// crossings, a vanishing kink is even, a vanishing bigon sums to zero, and
/// the three crossings of a third move sum to zero. Insertions are checked
/// through the inverse (decreasing) move.
pub fn check_parity_under_move(
    d: &LinkDiagram,
    m: &MoveDescriptor,
    sel: ParitySelector,
) -> Result<bool, ParityError> {
    let e = apply_move(d, m)?;
    let pd = parity(d, sel)?;
    let pe = parity(&e, sel)?;
    let bit = |dg: &LinkDiagram, p: &ParityAssignment, l: &str| {
        p.get(dg.crossing_index(l).expect("label present"))
    };
    for (i, c) in d.crossings().iter().enumerate() {
        if let Some(j) = e.crossing_index(&c.label) {
            if pd.get(i) != pe.get(j) {
                return Ok(false);
            }
        }
    }
    let new_labels: Vec<&str> = e
        .crossings()
        .iter()
        .filter(|c| d.crossing_index(&c.label).is_none())
        .map(|c| c.label.as_str())
        .collect();
    let ok = match m {
        MoveDescriptor::R1Insert { .. } => bit(&e, &pe, new_labels[0]) == 0,
        MoveDescriptor::R1Delete { label } => bit(d, &pd, label) == 0,
        MoveDescriptor::R2Insert { .. } => {
            (bit(&e, &pe, new_labels[0]) + bit(&e, &pe, new_labels[1])) % 2 == 0
        }
        MoveDescriptor::R2Delete { first, second } => {
            (bit(d, &pd, first) + bit(d, &pd, second)) % 2 == 0
        }
        MoveDescriptor::R3 { a, b, c } => {
            (bit(d, &pd, a) + bit(d, &pd, b) + bit(d, &pd, c)) % 2 == 0
        }
    };
    Ok(ok)
}
