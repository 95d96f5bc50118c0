//! C ABI over `birlin`.
//!
//! Every entry point returns a [`BirlinStatus`]; on failure a message is
//! available from [`birlin_last_error_message`] on the same thread. Handles
//! are opaque and must be released with their `_free` function. Strings
//! returned by the library are released with [`birlin_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use birlin::report::{self, Format, MuReport};
use birlin::{
    affine_dim, compose_mu, descent_chain, euler_chi, fixed_det_report, moduli_dim, verify_main,
    BundleType, Error, Genus, ModuliDescriptor, MuTree, ReductionChain, Verdict,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BirlinStatus {
    Ok = 0,
    InvalidInput = 1,
    InvariantViolation = 2,
    Overflow = 3,
    NullPointer = 4,
    Panic = 5,
}

/// One descent step, flattened.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BirlinStep {
    pub alpha_rank: i64,
    pub alpha_degree: i64,
    pub beta_rank: i64,
    pub beta_degree: i64,
    pub alpha1_rank: i64,
    pub alpha1_degree: i64,
    pub h: i64,
    pub h1: i64,
    pub chi_a1_beta: i64,
    pub l: i64,
    pub fiber_dim: i64,
}

/// Opaque descent chain.
pub struct BirlinChain {
    chain: ReductionChain,
}

/// Opaque `mu` tree with its fixed-determinant summary.
pub struct BirlinMu {
    report: MuReport,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> BirlinStatus {
    match e {
        Error::Overflow(_) => BirlinStatus::Overflow,
        Error::Invariant { .. } | Error::InapplicableEdge { .. } => {
            BirlinStatus::InvariantViolation
        }
        _ => BirlinStatus::InvalidInput,
    }
}

/// Run `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), (BirlinStatus, String)>) -> BirlinStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BirlinStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            BirlinStatus::Panic
        }
    }
}

fn lift(e: Error) -> (BirlinStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (BirlinStatus, String) {
    (BirlinStatus::NullPointer, format!("{what} is null"))
}

fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, (BirlinStatus, String)> {
    // SAFETY: the caller promises `p` is either null or valid for writes.
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s)
        .map(CString::into_raw)
        .unwrap_or(ptr::null_mut())
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn birlin_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// `chi(beta, alpha)` over a curve of genus `genus`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn birlin_euler_chi(
    genus: i64,
    beta_rank: i64,
    beta_degree: i64,
    alpha_rank: i64,
    alpha_degree: i64,
    out: *mut i64,
) -> BirlinStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let g = Genus::new(genus).map_err(lift)?;
        let b = BundleType::new(beta_rank, beta_degree).map_err(lift)?;
        let a = BundleType::new(alpha_rank, alpha_degree).map_err(lift)?;
        *out = euler_chi(b, a, g).map_err(lift)?;
        Ok(())
    })
}

/// Dimension of the moduli space of stable bundles of type `(rank, degree)`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn birlin_moduli_dim(
    genus: i64,
    rank: i64,
    degree: i64,
    out: *mut i64,
) -> BirlinStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let g = Genus::new(genus).map_err(lift)?;
        let m =
            ModuliDescriptor::new(g, BundleType::new(rank, degree).map_err(lift)?).map_err(lift)?;
        *out = moduli_dim(&m).map_err(lift)?;
        Ok(())
    })
}

/// Dimension of the affine fiber `(r^2 - h^2)(g - 1)`.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn birlin_affine_dim(
    genus: i64,
    rank: i64,
    degree: i64,
    out: *mut i64,
) -> BirlinStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let g = Genus::new(genus).map_err(lift)?;
        *out = affine_dim(g, BundleType::new(rank, degree).map_err(lift)?).map_err(lift)?;
        Ok(())
    })
}

/// Build and check the descent chain for `(rank, degree)`.
///
/// # Safety
/// `out` must be null or valid for writes. On success `*out` owns a handle
/// to be released with [`birlin_chain_free`].
#[no_mangle]
pub unsafe extern "C" fn birlin_chain_new(
    genus: i64,
    rank: i64,
    degree: i64,
    out: *mut *mut BirlinChain,
) -> BirlinStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let g = Genus::new(genus).map_err(lift)?;
        let chain = descent_chain(g, BundleType::new(rank, degree).map_err(lift)?).map_err(lift)?;
        chain.check().map_err(lift)?;
        *out = Box::into_raw(Box::new(BirlinChain { chain }));
        Ok(())
    })
}

/// Number of descent steps; 0 for a null handle.
///
/// # Safety
/// `chain` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn birlin_chain_len(chain: *const BirlinChain) -> usize {
    chain.as_ref().map_or(0, |c| c.chain.steps.len())
}

/// Copy step `index` into `*out`.
///
/// # Safety
/// `chain` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn birlin_chain_step(
    chain: *const BirlinChain,
    index: usize,
    out: *mut BirlinStep,
) -> BirlinStatus {
    guard(|| {
        let c = chain.as_ref().ok_or_else(|| null("chain"))?;
        let out = out_ref(out, "out")?;
        let s = c.chain.steps.get(index).ok_or_else(|| {
            (
                BirlinStatus::InvalidInput,
                format!(
                    "step {index} out of range (chain has {})",
                    c.chain.steps.len()
                ),
            )
        })?;
        *out = BirlinStep {
            alpha_rank: s.alpha.rank(),
            alpha_degree: s.alpha.degree(),
            beta_rank: s.beta.rank(),
            beta_degree: s.beta.degree(),
            alpha1_rank: s.alpha1.rank(),
            alpha1_degree: s.alpha1.degree(),
            h: s.h,
            h1: s.h1,
            chi_a1_beta: s.chi_a1_beta,
            l: s.l,
            fiber_dim: s.fiber_dim,
        };
        Ok(())
    })
}

/// Terminal type of the chain and the twist degree reaching `(r, 0)`.
///
/// # Safety
/// `chain` must be null or a live handle; outputs null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn birlin_chain_terminal(
    chain: *const BirlinChain,
    rank: *mut i64,
    degree: *mut i64,
    twist: *mut i64,
) -> BirlinStatus {
    guard(|| {
        let c = chain.as_ref().ok_or_else(|| null("chain"))?;
        let (r, d, t) = (
            out_ref(rank, "rank")?,
            out_ref(degree, "degree")?,
            out_ref(twist, "twist")?,
        );
        *r = c.chain.terminal.rank();
        *d = c.chain.terminal.degree();
        *t = c.chain.terminal_twist;
        Ok(())
    })
}

/// Versioned JSON rendering of the chain, or null on failure. Release with
/// [`birlin_string_free`].
///
/// # Safety
/// `chain` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn birlin_chain_to_json(chain: *const BirlinChain) -> *mut c_char {
    let mut s = None;
    guard(|| {
        let c = chain.as_ref().ok_or_else(|| null("chain"))?;
        s = Some(report::render_chain(&c.chain, Format::Json));
        Ok(())
    });
    s.map_or(ptr::null_mut(), into_c_string)
}

/// # Safety
/// `chain` must be null or a handle from [`birlin_chain_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn birlin_chain_free(chain: *mut BirlinChain) {
    if !chain.is_null() {
        drop(Box::from_raw(chain));
    }
}

/// Compose and check the `mu` tree for `(rank, degree)`.
///
/// # Safety
/// `out` must be null or valid for writes. On success `*out` owns a handle
/// to be released with [`birlin_mu_free`].
#[no_mangle]
pub unsafe extern "C" fn birlin_mu_new(
    genus: i64,
    rank: i64,
    degree: i64,
    out: *mut *mut BirlinMu,
) -> BirlinStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = ptr::null_mut();
        let g = Genus::new(genus).map_err(lift)?;
        let t = BundleType::new(rank, degree).map_err(lift)?;
        let tree: MuTree = compose_mu(g, t).map_err(lift)?;
        tree.check_ledger().map_err(lift)?;
        let report = MuReport {
            tree,
            fixed_det: fixed_det_report(g, t).map_err(lift)?,
        };
        *out = Box::into_raw(Box::new(BirlinMu { report }));
        Ok(())
    })
}

/// Number of top-level nodes; 0 for a null handle.
///
/// # Safety
/// `mu` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn birlin_mu_node_count(mu: *const BirlinMu) -> usize {
    mu.as_ref().map_or(0, |m| m.report.tree.nodes.len())
}

/// Fiber dimension of top-level node `index`.
///
/// # Safety
/// `mu` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn birlin_mu_node_fiber_dim(
    mu: *const BirlinMu,
    index: usize,
    out: *mut i64,
) -> BirlinStatus {
    guard(|| {
        let m = mu.as_ref().ok_or_else(|| null("mu"))?;
        let out = out_ref(out, "out")?;
        let n = m.report.tree.nodes.get(index).ok_or_else(|| {
            (
                BirlinStatus::InvalidInput,
                format!("node {index} out of range"),
            )
        })?;
        *out = n.fiber_dim;
        Ok(())
    })
}

/// Total fiber dimension; -1 for a null handle.
///
/// # Safety
/// `mu` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn birlin_mu_total_fiber_dim(mu: *const BirlinMu) -> i64 {
    mu.as_ref().map_or(-1, |m| m.report.tree.total_fiber_dim)
}

/// Versioned JSON rendering, or null on failure. Release with
/// [`birlin_string_free`].
///
/// # Safety
/// `mu` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn birlin_mu_to_json(mu: *const BirlinMu) -> *mut c_char {
    let mut s = None;
    guard(|| {
        let m = mu.as_ref().ok_or_else(|| null("mu"))?;
        s = Some(report::render_mu(&m.report, Format::Json));
        Ok(())
    });
    s.map_or(ptr::null_mut(), into_c_string)
}

/// # Safety
/// `mu` must be null or a handle from [`birlin_mu_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn birlin_mu_free(mu: *mut BirlinMu) {
    if !mu.is_null() {
        drop(Box::from_raw(mu));
    }
}

/// Transport the weight class along the main diagram. `*equal` is set to
/// whether the result matches `psi(rank, degree)`.
///
/// # Safety
/// `equal` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn birlin_brauer_verify(
    genus: i64,
    rank: i64,
    degree: i64,
    equal: *mut bool,
) -> BirlinStatus {
    guard(|| {
        let equal = out_ref(equal, "equal")?;
        let g = Genus::new(genus).map_err(lift)?;
        let d = verify_main(g, BundleType::new(rank, degree).map_err(lift)?).map_err(lift)?;
        *equal = d.verdict == Verdict::Equal;
        Ok(())
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer returned by a `_to_json` function, not yet
/// freed.
#[no_mangle]
pub unsafe extern "C" fn birlin_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Helper for Rust callers and tests: copy the last error message.
pub fn last_error() -> Option<String> {
    let p = birlin_last_error_message();
    // SAFETY: non-null pointers from `birlin_last_error_message` point at a
    // live NUL-terminated buffer owned by this thread.
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}
