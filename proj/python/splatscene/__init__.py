"""3D Gaussian splat scene toolkit."""

from ._splatscene import (
    DomainError,
    FormatError,
    Gaussian,
    GaussianCloud,
    LatentState,
    PromptId,
    SceneDims,
    ScheduleTable,
    Vec3,
    add_noise,
    assemble_stage3,
    build_schedule,
    compose_scene,
    contribution_scores,
    ddim_denoise_step,
    ddim_invert_step,
    default_schedule,
    dreamtime_weight,
    evaluation_trajectory,
    filter_cloud,
    guidance_direction,
    init_environment,
    load_ply,
    parse_scene_spec,
    plan_scene_fixture,
    pseudo_ground_truth,
    sample_stage1,
    sample_stage2_indoor,
    sample_stage2_outdoor,
    sample_timesteps,
    save_ply,
    solve_layout,
    time_window,
    verify_layout,
)

__all__ = [
    "DomainError",
    "FormatError",
    "Gaussian",
    "GaussianCloud",
    "LatentState",
    "PromptId",
    "SceneDims",
    "ScheduleTable",
    "Vec3",
    "add_noise",
    "assemble_stage3",
    "build_schedule",
    "compose_scene",
    "contribution_scores",
    "ddim_denoise_step",
    "ddim_invert_step",
    "default_schedule",
    "dreamtime_weight",
    "evaluation_trajectory",
    "filter_cloud",
    "guidance_direction",
    "init_environment",
    "load_ply",
    "parse_scene_spec",
    "plan_scene_fixture",
    "pseudo_ground_truth",
    "sample_stage1",
    "sample_stage2_indoor",
    "sample_stage2_outdoor",
    "sample_timesteps",
    "save_ply",
    "solve_layout",
    "time_window",
    "verify_layout",
]
