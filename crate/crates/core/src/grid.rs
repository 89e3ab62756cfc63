use std::ops::Range;

use crate::error::{Error, Result};

/// Division of the horizon into `M` consecutive batches of size `b`.
///
/// Timesteps are 0-based internally: batch `j` (0-based) covers
/// `j·b .. (j+1)·b`, which is the 1-based interval `((j)·b, (j+1)·b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchGrid {
    horizon: usize,
    batch_size: usize,
}

impl BatchGrid {
    /// Build a grid, truncating the requested horizon to a multiple of `batch_size`.
    pub fn new(requested_horizon: usize, batch_size: usize) -> Result<Self> {
        if batch_size == 0 {
            return Err(Error::InvalidGrid("batch size must be at least 1".into()));
        }
        if requested_horizon < batch_size {
            return Err(Error::InvalidGrid(format!(
                "horizon {requested_horizon} is shorter than batch size {batch_size}"
            )));
        }
        Ok(Self {
            horizon: requested_horizon / batch_size * batch_size,
            batch_size,
        })
    }

    /// The fully online grid `b = 1`.
    pub fn online(horizon: usize) -> Result<Self> {
        Self::new(horizon, 1)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn batch_size(&self) -> usize {
        self.batch_size
    }

    pub fn num_batches(&self) -> usize {
        self.horizon / self.batch_size
    }

    /// 0-based start index of every batch.
    pub fn boundaries(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_batches()).map(move |j| j * self.batch_size)
    }

    pub fn batch(&self, j: usize) -> Range<usize> {
        j * self.batch_size..(j + 1) * self.batch_size
    }

    pub fn batch_of(&self, t: usize) -> usize {
        t / self.batch_size
    }

    pub fn is_batch_end(&self, t: usize) -> bool {
        (t + 1) % self.batch_size == 0
    }
}

/// One action, its reward and the context it was taken in.
#[derive(Debug, Clone, PartialEq)]
pub struct Interaction {
    pub action: usize,
    pub reward: f64,
    pub context: Option<Vec<f64>>,
}

/// Ordered action–reward pairs, of which only a prefix is visible to the policy.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct History {
    entries: Vec<Interaction>,
    visible_len: usize,
}

impl History {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            entries: Vec::with_capacity(n),
            visible_len: 0,
        }
    }

    pub fn record(&mut self, action: usize, reward: f64, context: Option<Vec<f64>>) {
        self.entries.push(Interaction {
            action,
            reward,
            context,
        });
    }

    /// Release every recorded entry; returns the newly visible ones.
    pub fn release(&mut self) -> &[Interaction] {
        let start = self.visible_len;
        self.visible_len = self.entries.len();
        &self.entries[start..]
    }

    pub fn entries(&self) -> &[Interaction] {
        &self.entries
    }

    pub fn visible(&self) -> &[Interaction] {
        &self.entries[..self.visible_len]
    }

    pub fn visible_len(&self) -> usize {
        self.visible_len
    }

    pub fn pending(&self) -> &[Interaction] {
        &self.entries[self.visible_len..]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}
