from setuptools import setup, find_packages

setup(
    name="btsa-stiffness",
    packages=find_packages(exclude=["tests"]),
    py_modules=["app"],
    install_requires=[
        "pandas==2.2.0",
        "numpy==1.26.3",
        "duckdb",
        "python-dotenv==1.0.1",
        "scipy==1.12.0",
    ],
    extras_require={"test": ["pytest==8.0.0", "hypothesis==6.98.0"]},
    entry_points={"console_scripts": ["btsa=app:main"]},
)
