# Copyright 2026 The autoctx Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Python bindings for the autoctx fusion engine.

Array-in/array-out wrappers around the C++ core. Metric and pipeline reports
come back as dicts.
"""

import json as _json

from . import _autoctx
from ._autoctx import (
    AutoctxError,
    argmax,
    border_correct,
    centroids,
    classify_frame,
    compose_autocontext,
    connected_components,
    fuse_tissue,
    get_scheme,
    majority_vote,
    mean_track_score,
    necrosis_rescue,
    read_instances,
    read_label_png,
    read_pmap,
    register_scheme_json,
    scheme_ids,
    synth_fixtures,
    write_instances,
    write_label_png,
    write_pmap,
)


def micro_dice(pred, gt, scheme="puma_tissue6"):
    return _json.loads(_autoctx.micro_dice(pred, gt, scheme))


def detection_f1(pred, gt, scheme, radius=15.0):
    return _json.loads(_autoctx.detection_f1(pred, gt, scheme, radius))


def panoptic_quality(pred, gt, scheme, iou_threshold=0.5):
    return _json.loads(_autoctx.panoptic_quality(pred, gt, scheme, iou_threshold))


def micro_pq(pred, gt, scheme, iou_threshold=0.5):
    return _json.loads(_autoctx.micro_pq(pred, gt, scheme, iou_threshold))


def run_pipeline(config, out_dir, jobs=1, ablation=0):
    return _json.loads(_autoctx.run_pipeline(str(config), str(out_dir), jobs, ablation))


def eval_report(pred_dir, gt_dir, scheme="puma_tissue6", radius=15.0, iou_threshold=0.5):
    return _json.loads(
        _autoctx.eval_report(str(pred_dir), str(gt_dir), scheme, radius, iou_threshold)
    )
