use crate::config::{PassKind, SamplerConfig};
use crate::median::pixel_median;
use crate::window::window_indices;
use crate::{Result, SamplerError};
use rayon::prelude::*;
use viewloom_core::{FillState, Image, View, ViewGrid};
use viewloom_diffusion::seeding::derive_seed;
use viewloom_diffusion::{sample, ConditioningSet, Denoiser, Init};

const MV_TAG: u64 = 0x6d76;
const T_TAG: u64 = 0x74;

/// A grid cell pinned to a known frame after every pass.
#[derive(Debug, Clone)]
pub struct PinnedCell {
    pub row: usize,
    pub col: usize,
    pub image: Image,
    pub state: FillState,
}

struct PassContext<'a> {
    grid: &'a ViewGrid,
    row_inputs: &'a [View],
    col_inputs: &'a [View],
    denoiser: &'a dyn Denoiser,
    cfg: &'a SamplerConfig,
    init_level: usize,
    pass_index: usize,
}

/// Candidates for every cell along one axis element (one column for the
/// multi-view pass, one row for the temporal pass).
fn run_axis_element(ctx: &PassContext, kind: PassKind, element: usize) -> Result<Vec<Vec<Image>>> {
    let (k, l) = (ctx.grid.rows(), ctx.grid.cols());
    let n = ctx.cfg.window;
    let axis_len = match kind {
        PassKind::MultiView => k,
        PassKind::Temporal => l,
    };
    let mut candidates: Vec<Vec<Image>> = vec![Vec::new(); axis_len];
    for j in 0..axis_len {
        let idx = window_indices(j, n, axis_len);
        let (cond_views, cams, times): (Vec<View>, Vec<_>, Vec<f64>) = match kind {
            PassKind::MultiView => {
                // Conditioning: the input frame at the target time first, then
                // the input frames captured at the window's cameras (M = N+1).
                let mut cond = Vec::with_capacity(n + 1);
                cond.push(ctx.col_inputs[element].clone());
                cond.extend(idx.iter().map(|&r| ctx.row_inputs[r].clone()));
                let cams = idx.iter().map(|&r| ctx.grid.camera(r).clone()).collect();
                let times = vec![ctx.grid.times()[element]; idx.len()];
                (cond, cams, times)
            }
            PassKind::Temporal => {
                // Conditioning: the input frame at the target camera first,
                // then the input frames at the window's timestamps.
                let mut cond = Vec::with_capacity(n + 1);
                cond.push(ctx.row_inputs[element].clone());
                cond.extend(idx.iter().map(|&c| ctx.col_inputs[c].clone()));
                let cams = vec![ctx.grid.camera(element).clone(); idx.len()];
                let times = idx.iter().map(|&c| ctx.grid.times()[c]).collect();
                (cond, cams, times)
            }
        };

        let init = {
            let max = ctx.cfg.noise_schedule.ddim_steps();
            if ctx.init_level >= max {
                Init::PureNoise
            } else {
                let cells: Option<Vec<Image>> = idx
                    .iter()
                    .map(|&i| {
                        let (r, c) = match kind {
                            PassKind::MultiView => (i, element),
                            PassKind::Temporal => (element, i),
                        };
                        ctx.grid.cell(r, c).cloned()
                    })
                    .collect();
                match cells {
                    Some(images) => Init::FromImages { images, level: ctx.init_level },
                    None => Init::PureNoise,
                }
            }
        };

        let tag = match kind {
            PassKind::MultiView => MV_TAG,
            PassKind::Temporal => T_TAG,
        };
        let seed = derive_seed(&[
            ctx.cfg.seed,
            tag,
            ctx.pass_index as u64,
            element as u64,
            j as u64,
        ]);
        let out = sample(
            ctx.denoiser,
            &ConditioningSet::full(cond_views),
            &cams,
            &times,
            init,
            &ctx.cfg.noise_schedule,
            &ctx.cfg.guidance,
            seed,
        )?;
        for (slot, &i) in idx.iter().enumerate() {
            candidates[i].push(out[slot].clone());
        }
    }
    Ok(candidates)
}

fn check_inputs(grid: &ViewGrid, row_inputs: &[View], col_inputs: &[View]) -> Result<()> {
    if row_inputs.len() != grid.rows() {
        return Err(SamplerError::InputMismatch(format!(
            "{} per-camera input frames for {} grid rows",
            row_inputs.len(),
            grid.rows()
        )));
    }
    if col_inputs.len() != grid.cols() {
        return Err(SamplerError::InputMismatch(format!(
            "{} per-time input frames for {} grid columns",
            col_inputs.len(),
            grid.cols()
        )));
    }
    Ok(())
}

fn run_pass(
    grid: &ViewGrid,
    row_inputs: &[View],
    col_inputs: &[View],
    denoiser: &dyn Denoiser,
    cfg: &SamplerConfig,
    kind: PassKind,
    init_level: usize,
    pass_index: usize,
    pinned: &[PinnedCell],
) -> Result<ViewGrid> {
    check_inputs(grid, row_inputs, col_inputs)?;
    let ctx =
        PassContext { grid, row_inputs, col_inputs, denoiser, cfg, init_level, pass_index };
    let elements = match kind {
        PassKind::MultiView => grid.cols(),
        PassKind::Temporal => grid.rows(),
    };
    // Axis elements are independent; each reads only the pass-start grid.
    let results: Vec<Result<Vec<Image>>> = (0..elements)
        .into_par_iter()
        .map(|e| {
            let candidates = run_axis_element(&ctx, kind, e)?;
            Ok(candidates
                .iter()
                .map(|c| pixel_median(&c.iter().collect::<Vec<_>>()))
                .collect())
        })
        .collect();

    let mut out = grid.clone();
    for (e, res) in results.into_iter().enumerate() {
        let fused = res?;
        for (i, img) in fused.into_iter().enumerate() {
            let (r, c) = match kind {
                PassKind::MultiView => (i, e),
                PassKind::Temporal => (e, i),
            };
            out.set_cell(r, c, img, FillState::Generated)?;
        }
    }
    for pin in pinned {
        out.set_cell(pin.row, pin.col, pin.image.clone(), pin.state)?;
    }
    Ok(out)
}

/// One multi-view pass: for each column independently, generate every sliding
/// window of size N over the K rows, then fuse each cell's N candidates by
/// pixel-wise median. Cells pinned to input frames are restored afterwards.
#[allow(clippy::too_many_arguments)]
pub fn multiview_pass(
    grid: &ViewGrid,
    row_inputs: &[View],
    col_inputs: &[View],
    denoiser: &dyn Denoiser,
    cfg: &SamplerConfig,
    init_level: usize,
    pass_index: usize,
    pinned: &[PinnedCell],
) -> Result<ViewGrid> {
    run_pass(grid, row_inputs, col_inputs, denoiser, cfg, PassKind::MultiView, init_level, pass_index, pinned)
}

/// The temporal mirror of `multiview_pass`: windows slide over the L
/// timestamps of each camera row.
#[allow(clippy::too_many_arguments)]
pub fn temporal_pass(
    grid: &ViewGrid,
    row_inputs: &[View],
    col_inputs: &[View],
    denoiser: &dyn Denoiser,
    cfg: &SamplerConfig,
    init_level: usize,
    pass_index: usize,
    pinned: &[PinnedCell],
) -> Result<ViewGrid> {
    run_pass(grid, row_inputs, col_inputs, denoiser, cfg, PassKind::Temporal, init_level, pass_index, pinned)
}

/// Complete a K x L grid from explicit per-row and per-column input frames by
/// executing the configured pass schedule with SDEdit re-initialization.
pub fn alternate_sample_with_inputs(
    row_inputs: &[View],
    col_inputs: &[View],
    denoiser: &dyn Denoiser,
    cfg: &SamplerConfig,
    pinned: &[PinnedCell],
) -> Result<ViewGrid> {
    cfg.validate()?;
    let cameras = row_inputs.iter().map(|v| v.camera.clone()).collect::<Vec<_>>();
    let times = col_inputs.iter().map(|v| v.time).collect::<Vec<_>>();
    let mut grid = ViewGrid::new(cameras, times)?;
    for pin in pinned {
        grid.set_cell(pin.row, pin.col, pin.image.clone(), pin.state)?;
    }
    for (pass_index, pass) in cfg.schedule.iter().enumerate() {
        grid = run_pass(
            &grid,
            row_inputs,
            col_inputs,
            denoiser,
            cfg,
            pass.kind,
            pass.init_level,
            pass_index,
            pinned,
        )?;
    }
    debug_assert!(grid.is_complete());
    Ok(grid)
}

/// Complete the grid for an input video whose anchor cameras were picked by
/// farthest point sampling: grid rows are the anchor cameras, columns the
/// input timestamps, and cells that coincide with input frames stay pinned to
/// them.
pub fn alternate_sample(
    input_video: &[View],
    anchor_indices: &[usize],
    denoiser: &dyn Denoiser,
    cfg: &SamplerConfig,
) -> Result<ViewGrid> {
    if input_video.is_empty() {
        return Err(SamplerError::InputMismatch("empty input video".into()));
    }
    if anchor_indices.is_empty() || anchor_indices.iter().any(|&a| a >= input_video.len()) {
        return Err(SamplerError::InputMismatch("anchor indices out of range".into()));
    }
    let row_inputs: Vec<View> = anchor_indices.iter().map(|&a| input_video[a].clone()).collect();
    let pinned: Vec<PinnedCell> = anchor_indices
        .iter()
        .enumerate()
        .map(|(row, &a)| PinnedCell {
            row,
            col: a,
            image: input_video[a].image.clone(),
            state: FillState::Input,
        })
        .collect();
    alternate_sample_with_inputs(&row_inputs, input_video, denoiser, cfg, &pinned)
}
