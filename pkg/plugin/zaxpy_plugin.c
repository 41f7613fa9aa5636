/* Example plugin: the zaxpy kernel (z = 2*x + y, factor fixed by ABI.md).
 *
 * Input buffer holds x in the first n elements and y in the second n;
 * output holds z. Element type selected at compile time:
 *   (default)      double  (dtype_code 0)
 *   -DBB_DTYPE_F32 float   (dtype_code 1)
 *   -DBB_DTYPE_I32 int32_t (dtype_code 2)
 *
 * -DBB_ABI_OVERRIDE=<v> misreports the ABI version (host rejection tests).
 * -DBB_KERNEL_NAME='"..."' renames the kernel (unknown-family tests).
 * Compile with -ffp-contract=off so results stay bitwise equal to a
 * separate multiply-then-add host reference.
 */
#include <stdint.h>

#include "bb_plugin.h"

#ifndef BB_ABI_OVERRIDE
#define BB_ABI_OVERRIDE 1u
#endif

#ifndef BB_KERNEL_NAME
#define BB_KERNEL_NAME "zaxpy"
#endif

#if defined(BB_DTYPE_F32)
typedef float bb_elem;
#define BB_DTYPE_CODE 1u
#elif defined(BB_DTYPE_I32)
typedef int32_t bb_elem;
#define BB_DTYPE_CODE 2u
#else
typedef double bb_elem;
#define BB_DTYPE_CODE 0u
#endif

static int zaxpy_entry(const bb_config *config, const void *input,
                       void *output)
{
    if (config == 0 || input == 0 || output == 0) {
        return 1;
    }
    const bb_elem *x = (const bb_elem *)input;
    const bb_elem *y = x + config->n;
    bb_elem *z = (bb_elem *)output;
    const bb_elem factor = (bb_elem)2;
    int64_t n = (int64_t)config->n;
    int64_t i;
#ifdef _OPENMP
#pragma omp parallel for
#endif
    for (i = 0; i < n; ++i) {
        z[i] = factor * x[i] + y[i];
    }
    return 0;
}

static const bb_kernel_descriptor bb_kernels[] = {
    {BB_KERNEL_NAME, BB_DTYPE_CODE, zaxpy_entry},
};

uint32_t bb_abi_version(void)
{
    return BB_ABI_OVERRIDE;
}

uint32_t bb_kernel_count(void)
{
    return (uint32_t)(sizeof bb_kernels / sizeof bb_kernels[0]);
}

bb_kernel_descriptor bb_kernel_get(uint32_t index)
{
    if (index >= bb_kernel_count()) {
        bb_kernel_descriptor null_descriptor = {0, 0, 0};
        return null_descriptor;
    }
    return bb_kernels[index];
}
