use std::cell::Cell;

/// Desk-scale guards. Exceeding one of these is reported as
/// [`LpError::Guard`](crate::LpError::Guard), never silently truncated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of cells of a possibility space.
    pub max_cells: usize,
    /// Maximum dimension for [`enumerate_vertices`](crate::enumerate_vertices).
    pub max_vertex_dim: usize,
    /// Maximum constraint count for [`enumerate_vertices`](crate::enumerate_vertices).
    pub max_vertex_constraints: usize,
    /// Maximum number of variables eliminated by [`project_cone`](crate::project_cone).
    pub max_eliminated: usize,
    /// Maximum ambient dimension for [`extreme_rays`](crate::extreme_rays).
    pub max_ray_dim: usize,
    /// Maximum number of rays alive at any point of the double description method.
    pub max_rays: usize,
}

impl Limits {
    pub const DESK: Limits = Limits {
        max_cells: 1 << 24,
        max_vertex_dim: 12,
        max_vertex_constraints: 64,
        max_eliminated: 16,
        max_ray_dim: 32,
        max_rays: 20_000,
    };

    /// Componentwise minimum: guards can only be tightened.
    pub fn tightened(&self, other: &Limits) -> Limits {
        Limits {
            max_cells: self.max_cells.min(other.max_cells),
            max_vertex_dim: self.max_vertex_dim.min(other.max_vertex_dim),
            max_vertex_constraints: self
                .max_vertex_constraints
                .min(other.max_vertex_constraints),
            max_eliminated: self.max_eliminated.min(other.max_eliminated),
            max_ray_dim: self.max_ray_dim.min(other.max_ray_dim),
            max_rays: self.max_rays.min(other.max_rays),
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits::DESK
    }
}

/// Work counters, accumulated per thread.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Stats {
    pub lp_solves: u64,
    pub lp_pivots: u64,
    pub rays_enumerated: u64,
}

thread_local! {
    static LIMITS: Cell<Limits> = const { Cell::new(Limits::DESK) };
    static STATS: Cell<Stats> = const { Cell::new(Stats { lp_solves: 0, lp_pivots: 0, rays_enumerated: 0 }) };
}

pub fn current_limits() -> Limits {
    LIMITS.with(|l| l.get())
}

/// Runs `f` with the guards tightened to `limits` on the current thread.
/// Guards can never be raised above the desk defaults.
pub fn with_limits<T>(limits: Limits, f: impl FnOnce() -> T) -> T {
    let previous = current_limits();
    LIMITS.with(|l| l.set(previous.tightened(&limits)));
    struct Restore(Limits);
    impl Drop for Restore {
        fn drop(&mut self) {
            LIMITS.with(|l| l.set(self.0));
        }
    }
    let _restore = Restore(previous);
    f()
}

pub fn stats() -> Stats {
    STATS.with(|s| s.get())
}

pub fn reset_stats() {
    STATS.with(|s| s.set(Stats::default()));
}

pub(crate) fn record(update: impl FnOnce(&mut Stats)) {
    STATS.with(|s| {
        let mut current = s.get();
        update(&mut current);
        s.set(current);
    });
}
