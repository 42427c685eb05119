//! Peak memory probes.
//!
//! The kernel's peak resident set (`VmHWM`) is preferred. Where it is not
//! available the allocator counters are used; they only move when the
//! binary installs [`CountingAlloc`] as its global allocator.

use std::alloc::{GlobalAlloc, Layout, System};
use std::sync::atomic::{AtomicUsize, Ordering};

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

/// System allocator that tracks live and peak bytes.
pub struct CountingAlloc;

unsafe impl GlobalAlloc for CountingAlloc {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            let now = CURRENT.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            PEAK.fetch_max(now, Ordering::Relaxed);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        CURRENT.fetch_sub(layout.size(), Ordering::Relaxed);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemorySource {
    /// Peak resident set size from `/proc/self/status`.
    VmHwm,
    /// Peak live heap bytes from the counting allocator.
    Allocator,
    /// Measurement disabled.
    Off,
}

impl MemorySource {
    pub fn name(self) -> &'static str {
        match self {
            MemorySource::VmHwm => "vmhwm",
            MemorySource::Allocator => "allocator",
            MemorySource::Off => "off",
        }
    }
}

fn vm_hwm() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

/// Restart peak tracking, so the next reading covers one phase only.
pub fn reset_peak() {
    // resets VmHWM on Linux; harmless elsewhere
    let _ = std::fs::write("/proc/self/clear_refs", "5");
    PEAK.store(CURRENT.load(Ordering::Relaxed), Ordering::Relaxed);
}

pub fn peak() -> (u64, MemorySource) {
    match vm_hwm() {
        Some(b) => (b, MemorySource::VmHwm),
        None => (PEAK.load(Ordering::Relaxed) as u64, MemorySource::Allocator),
    }
}
