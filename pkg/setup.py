from setuptools import setup

setup(
    name="pic-workbench",
    version="1.0.0",
    description="Packed Interval Covering workbench: solvers, (3,B2)-SAT reduction and witness translation",
    py_modules=[
        "bench",
        "config",
        "database",
        "exceptions",
        "formats",
        "generators",
        "main",
        "pic_core",
        "reduction",
        "sat_core",
        "solvers",
        "svg_render",
    ],
    python_requires=">=3.11",
    install_requires=[
        "aiosqlite==0.19.0",
    ],
    extras_require={
        "test": [
            "pytest>=7.4",
            "hypothesis>=6.80",
        ],
    },
    entry_points={
        "console_scripts": [
            "pic-workbench=main:main",
        ],
    },
)
