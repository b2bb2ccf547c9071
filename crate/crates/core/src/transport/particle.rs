use super::geometry::Vec3;

/// A neutron in the event bank.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle {
    /// Unique within a cycle; keys the particle's random stream and orders
    /// fission sites.
    pub id: u64,
    /// cm.
    pub position: Vec3,
    /// Unit vector.
    pub direction: Vec3,
    pub group: usize,
    pub weight: f64,
    pub cell: usize,
    pub alive: bool,
    /// Events processed so far; position in the particle's random stream.
    pub event_counter: u64,
}

/// A banked fission neutron.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FissionSite {
    pub parent: u64,
    /// Parent's event counter at the fission.
    pub event: u64,
    /// Index among the sites of that fission.
    pub index: u32,
    pub position: Vec3,
    pub group: usize,
    pub cell: usize,
    pub weight: f64,
}

impl FissionSite {
    /// Ordering key that does not depend on how the bank was permuted.
    pub fn order_key(&self) -> (u64, u64, u32) {
        (self.parent, self.event, self.index)
    }
}
