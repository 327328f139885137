//! Eventually periodic sequences: a finite prefix followed by a cycle that
//! repeats forever. Block lists, scale sequences and Veech data all use it.

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventuallyPeriodic<T> {
    prefix: Vec<T>,
    cycle: Vec<T>,
}

impl<T> EventuallyPeriodic<T> {
    /// The cycle must be non-empty.
    pub fn new(prefix: Vec<T>, cycle: Vec<T>) -> Result<Self> {
        if cycle.is_empty() {
            return invalid("eventually periodic sequence needs a non-empty repeating part");
        }
        Ok(Self { prefix, cycle })
    }

    pub fn constant(value: T) -> Self {
        Self { prefix: Vec::new(), cycle: vec![value] }
    }

    pub fn get(&self, index: usize) -> &T {
        if index < self.prefix.len() {
            &self.prefix[index]
        } else {
            &self.cycle[(index - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn prefix(&self) -> &[T] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[T] {
        &self.cycle
    }

    /// Every distinct position class: the prefix followed by one copy of the cycle.
    pub fn representatives(&self) -> impl Iterator<Item = &T> {
        self.prefix.iter().chain(self.cycle.iter())
    }

    pub fn map<U>(&self, mut f: impl FnMut(&T) -> U) -> EventuallyPeriodic<U> {
        EventuallyPeriodic {
            prefix: self.prefix.iter().map(&mut f).collect(),
            cycle: self.cycle.iter().map(&mut f).collect(),
        }
    }

    pub fn try_map<U, E>(
        &self,
        mut f: impl FnMut(&T) -> Result<U, E>,
    ) -> Result<EventuallyPeriodic<U>, E> {
        Ok(EventuallyPeriodic {
            prefix: self.prefix.iter().map(&mut f).collect::<Result<_, _>>()?,
            cycle: self.cycle.iter().map(&mut f).collect::<Result<_, _>>()?,
        })
    }
}

impl<T: Clone> EventuallyPeriodic<T> {
    pub fn take(&self, n: usize) -> Vec<T> {
        (0..n).map(|i| self.get(i).clone()).collect()
    }
}
