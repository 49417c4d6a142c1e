// Copyright 2026 The vesselq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the vesselq stenosis-quantification library.
 *
 * Every fallible call returns a vq_status. On failure the output arguments
 * are left untouched and vq_last_error() describes the problem for the
 * calling thread. Strings returned through `char**` are heap-allocated and
 * must be released with vq_string_free(). Handles are released with their
 * matching *_free function; passing NULL to a *_free function is a no-op.
 */
#ifndef VESSELQ_VESSELQ_H_
#define VESSELQ_VESSELQ_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define VQ_API __declspec(dllexport)
#else
#define VQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as CLI exit codes. */
typedef enum vq_status {
  VQ_OK = 0,
  VQ_ERR_INTERNAL = 1,
  VQ_ERR_IO = 2,
  VQ_ERR_INVALID_INPUT = 3,
  VQ_ERR_INVALID_SPEC = 4,
  VQ_ERR_OUT_OF_RANGE = 5
} vq_status;

typedef enum vq_grade {
  VQ_GRADE_NONE = 0,
  VQ_GRADE_MILD = 1,
  VQ_GRADE_MODERATE = 2,
  VQ_GRADE_SEVERE = 3
} vq_grade;

typedef struct vq_mask vq_mask;
typedef struct vq_detection vq_detection;
typedef struct vq_phantom vq_phantom;

typedef struct vq_detector_config {
  double min_mean_diameter;     /* px, default 4 */
  double cluster_threshold_tau; /* px, default 8; 0 disables clustering */
  double report_floor;          /* severity fraction, default 0.25 */
  int median_window;            /* odd profile smoothing window, default 5; 1 disables */
  int max_search_radius;        /* px, default 50 */
  unsigned threads;             /* default 1 */
} vq_detector_config;

typedef struct vq_finding {
  int x;
  int y;
  int r_c;
  int r_s;
  int r_e;
  double eta;
  vq_grade grade;
  size_t branch_id;
} vq_finding;

VQ_API const char* vq_version(void);
VQ_API const char* vq_last_error(void);
VQ_API void vq_string_free(char* s);

VQ_API void vq_detector_config_init(vq_detector_config* config);

/* Masks */
VQ_API vq_status vq_mask_load(const char* path, uint8_t threshold, vq_mask** out);
/* `pixels` holds width*height bytes, row-major; nonzero is foreground. */
VQ_API vq_status vq_mask_from_pixels(int width, int height, const uint8_t* pixels, vq_mask** out);
VQ_API void vq_mask_free(vq_mask* mask);
VQ_API int vq_mask_width(const vq_mask* mask);
VQ_API int vq_mask_height(const vq_mask* mask);
VQ_API size_t vq_mask_foreground_count(const vq_mask* mask);
VQ_API vq_status vq_mask_write_png(const vq_mask* mask, const char* path);

/* Detection: thin, trace, profile, detect and cluster. */
VQ_API vq_status vq_detect(const vq_mask* mask, const vq_detector_config* config,
                           vq_detection** out);
VQ_API void vq_detection_free(vq_detection* detection);
VQ_API size_t vq_detection_count(const vq_detection* detection);
VQ_API size_t vq_detection_branch_count(const vq_detection* detection);
VQ_API vq_status vq_detection_get(const vq_detection* detection, size_t index, vq_finding* out);
VQ_API vq_status vq_detection_findings_json(const vq_detection* detection, const char* image_name,
                                            char** out);
VQ_API vq_status vq_detection_graph_json(const vq_detection* detection, char** out);
VQ_API vq_status vq_detection_profiles_csv(const vq_detection* detection, char** out);
VQ_API vq_status vq_detection_write_overlay(const vq_detection* detection, const char* png_path);
VQ_API vq_status vq_detection_write_skeleton(const vq_detection* detection, const char* pgm_path);

/* Segmentation metrics and BceDice loss between two mask files as JSON.
 * With `prob` nonzero the prediction's intensities / 255 feed the BCE term. */
VQ_API vq_status vq_metrics(const char* pred_path, const char* truth_path, uint8_t threshold,
                            int prob, double lambda1, double lambda2, char** out_json);

/* Detection on every annotated mask in `pred_dir`, scored against the
 * annotation file. `*complete` is set to 0 when some annotated image had no
 * readable mask; those images are listed in the report and skipped. */
VQ_API vq_status vq_eval(const char* pred_dir, const char* annotation_path,
                         const vq_detector_config* config, double gamma, uint8_t threshold,
                         char** out_json, int* complete);

/* Phantoms */
VQ_API vq_status vq_phantom_default(vq_phantom** out);
VQ_API vq_status vq_phantom_from_spec_json(const char* spec_json, vq_phantom** out);
VQ_API vq_status vq_phantom_random_tube(int width, int height, uint64_t seed, vq_phantom** out);
VQ_API vq_status vq_phantom_tree(int width, int height, uint64_t seed, int depth,
                                 vq_phantom** out);
VQ_API void vq_phantom_free(vq_phantom* phantom);
VQ_API size_t vq_phantom_tube_count(const vq_phantom* phantom);
VQ_API size_t vq_phantom_stenosis_count(const vq_phantom* phantom);
VQ_API vq_status vq_phantom_mask(const vq_phantom* phantom, vq_mask** out);
VQ_API vq_status vq_phantom_spec_json(const vq_phantom* phantom, char** out);
VQ_API vq_status vq_phantom_truth_json(const vq_phantom* phantom, char** out);
VQ_API vq_status vq_phantom_annotations_json(const vq_phantom* phantom, const char* image_name,
                                             char** out);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // VESSELQ_VESSELQ_H_
