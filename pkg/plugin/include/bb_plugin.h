/* bootbench kernel plugin ABI, version 1.
 *
 * A plugin is a shared library exporting exactly three functions:
 *
 *   uint32_t             bb_abi_version(void);   // must return 1
 *   uint32_t             bb_kernel_count(void);
 *   bb_kernel_descriptor bb_kernel_get(uint32_t index);
 *
 * Descriptors must stay valid for the library's lifetime. The host never
 * frees plugin-owned strings; the plugin never frees host buffers. All
 * buffers are allocated and initialized by the host before entry() runs,
 * and entry() must return only after the kernel has fully completed
 * (internal parallelism, OpenMP included, is the plugin's business).
 *
 * See ABI.md for the byte-level layout and the per-family buffer contracts.
 */
#ifndef BB_PLUGIN_H
#define BB_PLUGIN_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Fixed-layout configuration block, 24 bytes, no padding:
 *   offset  0: n                (uint64, element count)
 *   offset  8: teams            (uint32)
 *   offset 12: threads_per_team (uint32)
 *   offset 16: seed             (uint64)
 */
typedef struct {
    uint64_t n;
    uint32_t teams;
    uint32_t threads_per_team;
    uint64_t seed;
} bb_config;

#if defined(__STDC_VERSION__) && __STDC_VERSION__ >= 201112L
_Static_assert(sizeof(bb_config) == 24, "bb_config must be 24 bytes");
#endif

/* Returns 0 on success, nonzero on failure. */
typedef int (*bb_kernel_entry)(const bb_config *config,
                               const void *input, void *output);

/* dtype_code: 0 = f64, 1 = f32, 2 = i32.
 * bb_kernel_get returns an all-null descriptor for an out-of-range index. */
typedef struct {
    const char *name;
    uint32_t dtype_code;
    bb_kernel_entry entry;
} bb_kernel_descriptor;

uint32_t bb_abi_version(void);
uint32_t bb_kernel_count(void);
bb_kernel_descriptor bb_kernel_get(uint32_t index);

#ifdef __cplusplus
}
#endif

#endif /* BB_PLUGIN_H */
