//! The two-server system model.

use crate::distributions::DistributionSpec;
use crate::error::Error;

/// Which of the two servers is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ServerId {
    One,
    Two,
}

impl ServerId {
    pub fn other(self) -> Self {
        match self {
            Self::One => Self::Two,
            Self::Two => Self::One,
        }
    }

    pub fn from_number(n: i64) -> Result<Self, Error> {
        match n {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            _ => Err(Error::InvalidArgument(format!(
                "first_server must be 1 or 2, got {n}"
            ))),
        }
    }
}

/// Work and repair time distributions of both servers, plus which server
/// starts working. Both servers are new at time zero; the starting server
/// works while the other waits in standby.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemModel {
    pub work1: DistributionSpec,
    pub work2: DistributionSpec,
    pub repair1: DistributionSpec,
    pub repair2: DistributionSpec,
    pub first_server: ServerId,
}

impl SystemModel {
    pub fn new(
        work1: DistributionSpec,
        work2: DistributionSpec,
        repair1: DistributionSpec,
        repair2: DistributionSpec,
        first_server: ServerId,
    ) -> Result<Self, Error> {
        for d in [&work1, &work2, &repair1, &repair2] {
            d.validate()?;
        }
        Ok(Self {
            work1,
            work2,
            repair1,
            repair2,
            first_server,
        })
    }

    /// Model with identical distributions for both servers.
    pub fn symmetric(work: DistributionSpec, repair: DistributionSpec) -> Result<Self, Error> {
        Self::new(work, work, repair, repair, ServerId::One)
    }

    pub fn work(&self, server: ServerId) -> &DistributionSpec {
        match server {
            ServerId::One => &self.work1,
            ServerId::Two => &self.work2,
        }
    }

    pub fn repair(&self, server: ServerId) -> &DistributionSpec {
        match server {
            ServerId::One => &self.repair1,
            ServerId::Two => &self.repair2,
        }
    }

    /// Relabels so that server 1 is the one that works first. Every analysis
    /// route normalizes before computing, which makes `first_server = 2`
    /// exactly equivalent to the index-swapped model.
    pub fn normalized(&self) -> SystemModel {
        match self.first_server {
            ServerId::One => *self,
            ServerId::Two => SystemModel {
                work1: self.work2,
                work2: self.work1,
                repair1: self.repair2,
                repair2: self.repair1,
                first_server: ServerId::One,
            },
        }
    }
}
